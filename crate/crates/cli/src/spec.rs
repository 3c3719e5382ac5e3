//! Group spec mini-grammar: `name[:param[,param]]`, plus `power:base^k`.
//!
//! Accepted names: `sN`/`symmetric:N`, `wreath:N`, `dN`/`dihedral:N` (order
//! 2N), `zN`/`cyclic:N`, `psl2:Q`, `sl2:Q`, and `power:<spec>^K`.

use std::sync::Arc;

use hspsim_core::group::{
    make_cyclic, make_dihedral, make_direct_power, make_psl2, make_sl2, make_symmetric, make_wreath_s2,
};
use hspsim_core::{Error, FiniteGroup, Result};

fn number<T: std::str::FromStr>(token: &str, spec: &str) -> Result<T> {
    token
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad parameter {token:?} in group spec {spec:?}")))
}

pub fn parse_group(spec: &str) -> Result<FiniteGroup> {
    let s = spec.trim().to_ascii_lowercase();
    if let Some(rest) = s.strip_prefix("power:") {
        let (base, k) = rest
            .rsplit_once('^')
            .ok_or_else(|| Error::Parse(format!("power spec {spec:?} needs base^k")))?;
        let k: usize = number(k, spec)?;
        let base = parse_group(base)?;
        return make_direct_power(Arc::new(base), k);
    }
    let (name, params) = match s.split_once(':') {
        Some((n, p)) => (n.to_string(), Some(p.to_string())),
        None => {
            // short forms: s4, d4, z6
            let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
            let (n, p) = s.split_at(split);
            (n.to_string(), (!p.is_empty()).then(|| p.to_string()))
        }
    };
    let param = |p: &Option<String>| -> Result<String> {
        match p {
            Some(v) if !v.contains(',') => Ok(v.clone()),
            Some(v) => Err(Error::Parse(format!("unexpected extra parameter in {v:?} of {spec:?}"))),
            None => Err(Error::Parse(format!("group spec {spec:?} needs a parameter"))),
        }
    };
    match name.as_str() {
        "s" | "symmetric" | "sym" => make_symmetric(number(&param(&params)?, spec)?),
        "wreath" => make_wreath_s2(number(&param(&params)?, spec)?),
        "d" | "dihedral" => make_dihedral(number(&param(&params)?, spec)?),
        "z" | "c" | "cyclic" => make_cyclic(number(&param(&params)?, spec)?),
        "psl2" | "psl" => make_psl2(number(&param(&params)?, spec)?),
        "sl2" => make_sl2(number(&param(&params)?, spec)?),
        other => Err(Error::Parse(format!("unknown group name {other:?} in spec {spec:?}"))),
    }
}
