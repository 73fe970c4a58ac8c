//! Argument value parsers shared by the subcommands.

/// Densities accept plain floats and the power form `2^-20`.
pub fn parse_alpha(tok: &str) -> Result<f64, String> {
    let t = tok.trim();
    if let Some(exp) = t.strip_prefix("2^") {
        let e: f64 = exp.parse().map_err(|_| format!("bad exponent in {t:?}"))?;
        return Ok(e.exp2());
    }
    t.parse::<f64>().map_err(|_| format!("bad density {t:?}"))
}

/// Comma-separated densities; an item `2^-A..2^-B[:S]` expands to the
/// exponent range A..=B in steps of S (default 4).
pub fn parse_alpha_grid(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        match item.split_once("..") {
            None => out.push(parse_alpha(item)?),
            Some((lo, rest)) => {
                let (hi, step) = match rest.split_once(':') {
                    None => (rest, 4u32),
                    Some((h, st)) => (
                        h,
                        st.trim()
                            .parse()
                            .map_err(|_| format!("bad step in {item:?}"))?,
                    ),
                };
                let e_lo = range_exponent(lo)?;
                let e_hi = range_exponent(hi)?;
                if e_lo > e_hi {
                    return Err(format!(
                        "range {item:?} must go from larger to smaller density"
                    ));
                }
                if step == 0 {
                    return Err(format!("range {item:?} has step 0"));
                }
                let mut e = e_lo;
                while e <= e_hi {
                    out.push((-(e as f64)).exp2());
                    e += step;
                }
            }
        }
    }
    if out.is_empty() {
        return Err("no densities given".into());
    }
    Ok(out)
}

fn range_exponent(tok: &str) -> Result<u32, String> {
    tok.trim()
        .strip_prefix("2^-")
        .and_then(|e| e.parse().ok())
        .ok_or_else(|| format!("range endpoints must look like 2^-8, got {tok:?}"))
}

/// Node budgets accept integers and scientific notation like `1e8`.
pub fn parse_budget(s: &str) -> Result<u64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = t.parse().map_err(|_| format!("bad budget {t:?}"))?;
    if !f.is_finite() || f < 0.0 || f > u64::MAX as f64 {
        return Err(format!("budget {t:?} out of range"));
    }
    Ok(f as u64)
}

/// Comma-separated frequency list; empty means rank 0.
pub fn parse_freqs(s: &str) -> Result<Vec<u64>, String> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| format!("bad frequency {tok:?}"))
        })
        .collect()
}

/// Comma-separated interval targets for the density curve.
pub fn parse_targets(s: &str) -> Result<Vec<u64>, String> {
    let list: Result<Vec<u64>, String> = s
        .split(',')
        .map(|tok| {
            let t = tok.trim();
            parse_budget(t)
        })
        .collect();
    let list = list?;
    if list.is_empty() {
        return Err("no targets given".into());
    }
    Ok(list)
}
