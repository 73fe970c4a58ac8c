mod args;
mod ctx;
mod manifest;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use args::{parse_alpha, parse_alpha_grid, parse_budget, parse_freqs, parse_targets};
use bohrlab_core::{
    behrend_construct, behrend_construct_with_base, behrend_density_curve, check_almost_period,
    compare_schemes, convolve_counts, count_solutions, density_decay_fit, density_dichotomy,
    extremal_table, find_regular_radius, max_sampling_gamma, run, sample_r, sweep,
    verify_r_concentration, BohrSet, BohrSpec, DichotomyOutcome, IncrementSide, KPolicy, Modulus,
    SimConfig, Verdict, ZnSet,
};
use ctx::{csv_bytes, CliError, Ctx};

/// Experiment driver for Bohr sets, convolution counting, sampling
/// concentration, solution-free constructions, and the density increment
/// simulator. Every run appends one JSON line to the manifest.
#[derive(Parser)]
#[command(name = "bohrlab", version, max_term_width = 100)]
struct Cli {
    /// Worker threads; BOHRLAB_THREADS mirrors this. Defaults to the
    /// available parallelism. Never changes numerical output.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// RNG seed for stochastic commands. Omitted, a fresh seed is drawn and
    /// printed so the run stays reproducible.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Manifest file receiving one JSON line per run.
    #[arg(long, global = true, default_value = "runs.jsonl")]
    manifest: PathBuf,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build Bohr sets and certify regular radii
    #[command(subcommand)]
    Bohr(BohrCmd),
    /// Convolutions and solution counting
    #[command(subcommand)]
    Conv(ConvCmd),
    /// Random periodizations, concentration reports, density dichotomy
    #[command(subcommand)]
    Period(PeriodCmd),
    /// Solution-free set constructions
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Exact maximum solution-free subsets of {1..N}
    Extremal(ExtremalArgs),
    /// Density increment recursion simulator
    #[command(subcommand)]
    Sim(SimCmd),
}

#[derive(Subcommand)]
enum BohrCmd {
    /// Build B(Gamma, rho) in Z_n and print it in set-file format
    Build {
        /// Modulus n
        #[arg(long)]
        n: u64,
        /// Comma-separated frequencies, e.g. 1,37 (empty for rank 0)
        #[arg(long, default_value = "")]
        gamma: String,
        /// Radius in [0, 2]
        #[arg(long)]
        rho: f64,
        /// Emit the dilate B_delta instead of B
        #[arg(long)]
        delta: Option<f64>,
        /// Write the set file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a regular dilate factor in [1/2, 1] and certify it
    Regular {
        #[arg(long)]
        n: u64,
        /// Comma-separated frequencies
        #[arg(long, default_value = "")]
        gamma: String,
        #[arg(long)]
        rho: f64,
        /// Scan step for the dilate factor (default 1/(800 d))
        #[arg(long)]
        step: Option<f64>,
        /// Write the certified dilate's set file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the certification grid as CSV delta,ratio,pass
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConvCmd {
    /// Count solutions of x + y + z = 3w inside a set
    Count {
        /// Set, inline (n:11;elems:1,2,3) or a file path
        #[arg(long)]
        set: String,
    },
    /// Exact indicator convolution counts as CSV x,value
    Convolve {
        /// First set (inline or file)
        #[arg(long)]
        a: String,
        /// Second set (inline or file)
        #[arg(long)]
        b: String,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PeriodCmd {
    /// Draw one random periodization R of M smoothed by T
    Sample {
        #[arg(long)]
        m: String,
        #[arg(long)]
        t: String,
        /// Sampling bound gamma: 'auto' for max 1_M * mu_T, or a float
        #[arg(long, default_value = "auto", value_parser = parse_gamma)]
        gamma: GammaArg,
        /// Write the sampled set file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo concentration report over independent samples of R
    Verify {
        #[arg(long)]
        a: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        l: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value = "auto", value_parser = parse_gamma)]
        gamma: GammaArg,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Also test the almost-period inequality at this epsilon
        #[arg(long)]
        eps: Option<f64>,
        /// Write per-trial CSV trial,size_dev,linf_dev,hit here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide witness-or-increment for A inside a regular Bohr set
    Dichotomy {
        #[arg(long)]
        n: u64,
        /// The subset A of B (inline or file)
        #[arg(long)]
        a: String,
        /// Frequencies of B
        #[arg(long, default_value = "")]
        gamma: String,
        /// Radius of B
        #[arg(long)]
        rho: f64,
        /// Dilate factor delta; B' and B'' default to B_delta
        #[arg(long)]
        delta: f64,
        /// Frequencies of B' (with --rho-p overrides the default B_delta)
        #[arg(long, requires = "rho_p")]
        gamma_p: Option<String>,
        #[arg(long, requires = "gamma_p")]
        rho_p: Option<f64>,
        /// Frequencies of B'' (with --rho-pp overrides the default B_delta)
        #[arg(long, requires = "rho_pp")]
        gamma_pp: Option<String>,
        #[arg(long, requires = "gamma_pp")]
        rho_pp: Option<f64>,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Digits-on-a-sphere solution-free subset of {1..M}
    Behrend {
        #[arg(long)]
        m: u64,
        /// Digit base: 'auto' scans for the largest output
        #[arg(long, default_value = "auto", value_parser = parse_base)]
        base: BaseArg,
        /// Write the set file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density curve over several targets as CSV M,size,density
    Curve {
        /// Comma-separated targets, e.g. 100,1000,1e4
        #[arg(long, value_parser = parse_targets_v)]
        ms: Targets,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExtremalArgs {
    /// Table rows N = 1..=n
    #[arg(long)]
    n: u64,
    /// Branch-and-bound node budget per row (accepts 1e8 notation)
    #[arg(long, default_value = "1e8", value_parser = parse_budget_v)]
    budget: u64,
    /// Write CSV N,max_size,witness,exact here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SimCmd {
    /// Run the recursion once at a fixed density and modulus size
    Run {
        /// Starting density (accepts 2^-20 notation)
        #[arg(long, value_parser = parse_alpha_v)]
        alpha0: f64,
        /// log2 of the ambient modulus
        #[arg(long)]
        logn: f64,
        #[command(flatten)]
        cfg: SimCfgArgs,
        /// Write the trace CSV here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thresholds over a density grid with a fitted exponent
    Sweep {
        /// Densities: comma list and/or ranges like 2^-8..2^-64[:4]
        #[arg(long, default_value = "2^-8..2^-64", value_parser = parse_grid_v)]
        alphas: AlphaGrid,
        #[command(flatten)]
        cfg: SimCfgArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full scheme vs old-only scheme on the same grid
    Compare {
        #[arg(long, default_value = "2^-8..2^-64", value_parser = parse_grid_v)]
        alphas: AlphaGrid,
        #[command(flatten)]
        cfg: SimCfgArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SimCfgArgs {
    /// Radius-loss constant in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Rank-growth constant, at least 1
    #[arg(long = "C", default_value_t = 1.0)]
    big_c: f64,
    /// Densities above c0 take the old branch (default 1/(2e))
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long = "k-policy", value_enum, default_value_t = KPolicyArg::Worst)]
    k_policy: KPolicyArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KPolicyArg {
    /// Maximal k each step (the proof's pessimistic accounting)
    Worst,
    /// k maximizing the rank growth
    Maxd,
    /// Seeded uniform k
    Sampled,
}

impl SimCfgArgs {
    fn to_config(&self, ctx: &Ctx, alpha0: f64, log2_n: f64) -> SimConfig {
        SimConfig {
            c: self.c,
            big_c: self.big_c,
            c0: self.c0.unwrap_or_else(SimConfig::default_c0),
            k_policy: match self.k_policy {
                KPolicyArg::Worst => KPolicy::WorstCase,
                KPolicyArg::Maxd => KPolicy::AdversarialMaxD,
                KPolicyArg::Sampled => KPolicy::Sampled { seed: ctx.seed() },
            },
            alpha0,
            log2_n,
        }
    }
}

#[derive(Clone)]
enum GammaArg {
    Auto,
    Fixed(f64),
}

impl GammaArg {
    fn resolve(&self, m: &ZnSet, t: &ZnSet) -> Result<f64, CliError> {
        match self {
            GammaArg::Auto => Ok(max_sampling_gamma(m, t)?),
            GammaArg::Fixed(g) => Ok(*g),
        }
    }
}

fn parse_gamma(s: &str) -> Result<GammaArg, String> {
    let t = s.trim();
    if t == "auto" {
        return Ok(GammaArg::Auto);
    }
    t.parse()
        .map(GammaArg::Fixed)
        .map_err(|_| format!("gamma must be 'auto' or a float, got {t:?}"))
}

#[derive(Clone)]
enum BaseArg {
    Auto,
    Fixed(u64),
}

fn parse_base(s: &str) -> Result<BaseArg, String> {
    let t = s.trim();
    if t == "auto" {
        return Ok(BaseArg::Auto);
    }
    t.parse()
        .map(BaseArg::Fixed)
        .map_err(|_| format!("base must be 'auto' or an integer, got {t:?}"))
}

#[derive(Clone)]
struct AlphaGrid(Vec<f64>);

fn parse_grid_v(s: &str) -> Result<AlphaGrid, String> {
    parse_alpha_grid(s).map(AlphaGrid)
}

fn parse_alpha_v(s: &str) -> Result<f64, String> {
    parse_alpha(s)
}

fn parse_budget_v(s: &str) -> Result<u64, String> {
    parse_budget(s)
}

#[derive(Clone)]
struct Targets(Vec<u64>);

fn parse_targets_v(s: &str) -> Result<Targets, String> {
    parse_targets(s).map(Targets)
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("BOHRLAB_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() {
    // Die quietly on a closed pipe, as line-oriented tools do.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    init_threads(cli.threads);
    let ctx = Ctx::new(cli.seed);
    let t0 = Instant::now();
    let outcome = dispatch(&cli.cmd, &ctx)
        .and_then(|()| manifest::append(&cli.manifest, &argv, &ctx, t0.elapsed()));
    if let Err(e) = outcome {
        eprintln!("error: {}: {e}", e.name());
        std::process::exit(1);
    }
}

fn dispatch(cmd: &Cmd, ctx: &Ctx) -> Result<(), CliError> {
    match cmd {
        Cmd::Bohr(c) => bohr_cmd(c, ctx),
        Cmd::Conv(c) => conv_cmd(c, ctx),
        Cmd::Period(c) => period_cmd(c, ctx),
        Cmd::Construct(c) => construct_cmd(c, ctx),
        Cmd::Extremal(a) => extremal_cmd(a, ctx),
        Cmd::Sim(c) => sim_cmd(c, ctx),
    }
}

fn build_bohr(n: u64, gamma: &str, rho: f64) -> Result<BohrSet, CliError> {
    let freqs = parse_freqs(gamma).map_err(|m| bohrlab_core::Error::Parse(m))?;
    let spec = BohrSpec::new(Modulus::new(n)?, &freqs, rho)?;
    Ok(BohrSet::build(spec))
}

fn set_text(set: &ZnSet) -> String {
    format!("{}\n", set.to_text())
}

fn bohr_cmd(cmd: &BohrCmd, ctx: &Ctx) -> Result<(), CliError> {
    match cmd {
        BohrCmd::Build {
            n,
            gamma,
            rho,
            delta,
            out,
        } => {
            let b = build_bohr(*n, gamma, *rho)?;
            let b = match delta {
                Some(d) => b.dilate(*d)?,
                None => b,
            };
            ctx.emit(out.as_deref(), set_text(b.elements()).as_bytes())
        }
        BohrCmd::Regular {
            n,
            gamma,
            rho,
            step,
            out,
            report,
        } => {
            let b = build_bohr(*n, gamma, *rho)?;
            let (delta, rep) = find_regular_radius(&b, *step)?;
            println!(
                "delta_star={delta} rank={} base_size={}",
                rep.rank, rep.base_size
            );
            if let Some(path) = report {
                let rows: Vec<Vec<String>> = rep
                    .grid
                    .iter()
                    .map(|p| {
                        vec![
                            p.perturbation.to_string(),
                            p.ratio.to_string(),
                            p.pass.to_string(),
                        ]
                    })
                    .collect();
                ctx.write_atomic(path, &csv_bytes(&["delta", "ratio", "pass"], &rows)?)?;
            }
            let certified = b.dilate(delta)?;
            ctx.emit(out.as_deref(), set_text(certified.elements()).as_bytes())
        }
    }
}

fn conv_cmd(cmd: &ConvCmd, ctx: &Ctx) -> Result<(), CliError> {
    match cmd {
        ConvCmd::Count { set } => {
            let a = ctx.load_set(set)?;
            let c = count_solutions(&a)?;
            println!(
                "total={} trivial={} nontrivial={}",
                c.total, c.trivial, c.nontrivial
            );
            Ok(())
        }
        ConvCmd::Convolve { a, b, out } => {
            let sa = ctx.load_set(a)?;
            let sb = ctx.load_set(b)?;
            let counts = convolve_counts(&sa, &sb)?;
            let rows: Vec<Vec<String>> = counts
                .iter()
                .enumerate()
                .map(|(x, v)| vec![x.to_string(), v.to_string()])
                .collect();
            ctx.emit(out.as_deref(), &csv_bytes(&["x", "value"], &rows)?)
        }
    }
}

fn period_cmd(cmd: &PeriodCmd, ctx: &Ctx) -> Result<(), CliError> {
    match cmd {
        PeriodCmd::Sample { m, t, gamma, out } => {
            let sm = ctx.load_set(m)?;
            let st = ctx.load_set(t)?;
            let g = gamma.resolve(&sm, &st)?;
            let r = sample_r(&sm, &st, g, ctx.seed())?;
            println!(
                "gamma={g} r_size={} expected_size={}",
                r.card(),
                sm.card() as f64 / g
            );
            ctx.emit(out.as_deref(), set_text(&r).as_bytes())
        }
        PeriodCmd::Verify {
            a,
            m,
            l,
            t,
            gamma,
            trials,
            eps,
            out,
        } => {
            let sa = ctx.load_set(a)?;
            let sm = ctx.load_set(m)?;
            let sl = ctx.load_set(l)?;
            let st = ctx.load_set(t)?;
            let g = gamma.resolve(&sm, &st)?;
            let rep = verify_r_concentration(&sa, &sm, &sl, &st, g, *trials, ctx.seed())?;
            println!(
                "trials={} size_hits={} linf_hits={} w_size={} expected_r_size={} \
                 size_bound={} linf_bound={}",
                rep.trials,
                rep.size_hits,
                rep.linf_hits,
                rep.w_size,
                rep.expected_r_size,
                rep.size_bound,
                rep.linf_bound
            );
            if let Some(eps) = eps {
                let (ok, achieved) = check_almost_period(&sa, &sm, &sl, &st, *eps)?;
                println!("almost_period_ok={ok} achieved={achieved}");
            }
            let rows: Vec<Vec<String>> = rep
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.trial.to_string(),
                        r.size_dev.to_string(),
                        r.linf_dev.to_string(),
                        r.hit().to_string(),
                    ]
                })
                .collect();
            ctx.emit(
                out.as_deref(),
                &csv_bytes(&["trial", "size_dev", "linf_dev", "hit"], &rows)?,
            )
        }
        PeriodCmd::Dichotomy {
            n,
            a,
            gamma,
            rho,
            delta,
            gamma_p,
            rho_p,
            gamma_pp,
            rho_pp,
        } => {
            let b = build_bohr(*n, gamma, *rho)?;
            let sa = ctx.load_set(a)?;
            let bp = match (gamma_p, rho_p) {
                (Some(g), Some(r)) => build_bohr(*n, g, *r)?,
                _ => b.dilate(*delta)?,
            };
            let bpp = match (gamma_pp, rho_pp) {
                (Some(g), Some(r)) => build_bohr(*n, g, *r)?,
                _ => b.dilate(*delta)?,
            };
            let alpha = sa.card() as f64 / b.size() as f64;
            match density_dichotomy(&sa, &b, &bp, &bpp, alpha, *delta)? {
                DichotomyOutcome::Witness {
                    x,
                    density_p,
                    density_pp,
                } => {
                    println!("witness x={x} density_p={density_p} density_pp={density_pp}");
                }
                DichotomyOutcome::Increment { side, x, value } => {
                    let side = match side {
                        IncrementSide::Prime => "prime",
                        IncrementSide::DoublePrime => "double-prime",
                    };
                    println!("increment side={side} x={x} value={value}");
                }
            }
            Ok(())
        }
    }
}

fn construct_cmd(cmd: &ConstructCmd, ctx: &Ctx) -> Result<(), CliError> {
    match cmd {
        ConstructCmd::Behrend { m, base, out } => {
            let r = match base {
                BaseArg::Auto => behrend_construct(*m)?,
                BaseArg::Fixed(b) => behrend_construct_with_base(*m, *b)?,
            };
            println!(
                "{},{},{},{},{},{}",
                r.m,
                r.size(),
                r.density(),
                r.params.base,
                r.params.dim,
                r.shell
            );
            let (_, embedded) = bohrlab_core::embed_interval(&r.elems, r.m)?;
            ctx.emit(out.as_deref(), set_text(&embedded).as_bytes())
        }
        ConstructCmd::Curve { ms, out } => {
            let points = behrend_density_curve(&ms.0)?;
            let fit = density_decay_fit(&points)?;
            println!(
                "slope={} intercept={} r_squared={}",
                fit.slope, fit.intercept, fit.r_squared
            );
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|p| vec![p.m.to_string(), p.size.to_string(), p.density.to_string()])
                .collect();
            ctx.emit(
                out.as_deref(),
                &csv_bytes(&["M", "size", "density"], &rows)?,
            )
        }
    }
}

fn extremal_cmd(a: &ExtremalArgs, ctx: &Ctx) -> Result<(), CliError> {
    let table = extremal_table(a.n, a.budget)?;
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|r| {
            let witness: Vec<String> = r.witness.iter().map(|v| v.to_string()).collect();
            vec![
                r.n.to_string(),
                r.max_size.to_string(),
                witness.join(" "),
                r.exact.to_string(),
            ]
        })
        .collect();
    ctx.emit(
        a.out.as_deref(),
        &csv_bytes(&["N", "max_size", "witness", "exact"], &rows)?,
    )
}

fn sim_cmd(cmd: &SimCmd, ctx: &Ctx) -> Result<(), CliError> {
    match cmd {
        SimCmd::Run {
            alpha0,
            logn,
            cfg,
            out,
        } => {
            let config = cfg.to_config(ctx, *alpha0, *logn);
            let res = run(&config)?;
            let verdict = match res.verdict {
                Verdict::Saturated => "saturated".to_string(),
                Verdict::Degenerate => "degenerate".to_string(),
                Verdict::ContinuationFailed { implied_log2_n } => {
                    format!("continuation-failed implied_log2_n={implied_log2_n}")
                }
            };
            println!("verdict={verdict} steps={}", res.steps());
            if let Some(s) = res.final_state() {
                println!(
                    "d_final={} alpha_final={} log2_rho_final={}",
                    s.d,
                    s.alpha(),
                    s.log2_rho
                );
            }
            if let Some(path) = out {
                let rows: Vec<Vec<String>> = res
                    .states
                    .iter()
                    .map(|s| {
                        let req = if s.log2_alpha_inv > 0.0 {
                            bohrlab_core::sim::continuation_requirement(s, &config).to_string()
                        } else {
                            String::new()
                        };
                        vec![
                            s.i.to_string(),
                            s.branch.map(|b| b.label().to_string()).unwrap_or_default(),
                            s.k.map(|k| k.to_string()).unwrap_or_default(),
                            s.h.map(|h| h.to_string()).unwrap_or_default(),
                            s.d.to_string(),
                            s.alpha().to_string(),
                            s.log2_rho.to_string(),
                            req,
                        ]
                    })
                    .collect();
                let header = [
                    "i",
                    "branch",
                    "k",
                    "h",
                    "d",
                    "alpha",
                    "log2_rho",
                    "log2_n_required",
                ];
                ctx.write_atomic(path, &csv_bytes(&header, &rows)?)?;
            }
            Ok(())
        }
        SimCmd::Sweep { alphas, cfg, out } => {
            let base = cfg.to_config(ctx, 0.25, 0.0);
            let rep = sweep(&alphas.0, &base)?;
            println!(
                "fitted_exponent={} r_squared={}",
                rep.fit.slope, rep.fit.r_squared
            );
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.alpha0.to_string(),
                        r.log2_n_threshold.to_string(),
                        r.steps.to_string(),
                        r.d_final.to_string(),
                        r.log2_rho_final.to_string(),
                        rep.fit.slope.to_string(),
                    ]
                })
                .collect();
            let header = [
                "alpha0",
                "logN_threshold",
                "steps",
                "d_final",
                "log_rho_final",
                "fitted_exponent",
            ];
            ctx.emit(out.as_deref(), &csv_bytes(&header, &rows)?)
        }
        SimCmd::Compare { alphas, cfg, out } => {
            let base = cfg.to_config(ctx, 0.25, 0.0);
            let rep = compare_schemes(&alphas.0, &base)?;
            println!(
                "main_exponent={} old_exponent={} main_exceeds_old={}",
                rep.main_fit.slope, rep.old_fit.slope, rep.main_exceeds_old
            );
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.alpha0.to_string(),
                        r.main_log2_n_threshold.to_string(),
                        r.old_log2_n_threshold.to_string(),
                    ]
                })
                .collect();
            let header = ["alpha0", "main_logN_threshold", "old_logN_threshold"];
            ctx.emit(out.as_deref(), &csv_bytes(&header, &rows)?)
        }
    }
}
