//! Named groups and cocycles, addressable by registry strings such as
//! `cyclic:4`, `product:cyclic:2,symmetric:3` or `cocycle:z2cubed-omega`.

use std::sync::Arc;

use crate::cochain::{Cochain, Phase};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::Groupoid;

/// `Z₂ × Z₂`, element `u` encoding `(u_a, u_b)` as `2u_a + u_b`.
pub fn klein() -> FiniteGroup {
    FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)).with_name("klein")
}

/// `Z₂ × Z₂ × Z₂`, element `u` encoding `(u_a, u_b, u_c)` as `4u_a + 2u_b + u_c`.
pub fn z2cubed() -> FiniteGroup {
    let z2 = FiniteGroup::cyclic(2);
    FiniteGroup::product(&FiniteGroup::product(&z2, &z2), &z2).with_name("z2cubed")
}

fn on_delooping(group: &FiniteGroup, degree: usize, f: impl Fn(&[usize]) -> Phase) -> Cochain {
    Cochain::from_fn(&Arc::new(Groupoid::delooping(group)), degree, f)
}

/// `θ_V(u, v) = (−1)^{u_a v_b}` on the Klein group.
pub fn klein_theta_v() -> (FiniteGroup, Cochain) {
    let g = klein();
    let c = on_delooping(&g, 2, |s| Phase::new(((s[0] >> 1) & (s[1] & 1)) as i64, 2));
    (g, c)
}

/// `ω(u, v, w) = (−1)^{u_a v_b w_c}` on `(Z₂)³`.
pub fn z2cubed_omega() -> (FiniteGroup, Cochain) {
    let g = z2cubed();
    let c = on_delooping(&g, 3, |s| Phase::new(((s[0] >> 2) & (s[1] >> 1) & s[2] & 1) as i64, 2));
    (g, c)
}

/// `ω(a, b, c) = exp(2πi k·a·(b + c − [b + c]_n)/n²)` on `Z_n`.
pub fn cyclic_omega(n: usize, k: i64) -> (FiniteGroup, Cochain) {
    let g = FiniteGroup::cyclic(n);
    let c = on_delooping(&g, 3, |s| {
        let carry = i64::from(s[1] + s[2] >= n);
        Phase::new(k * s[0] as i64 * carry, n as i64)
    });
    (g, c)
}

/// Splits on commas that are not inside parentheses.
fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        strip_parens(&s[1..s.len() - 1])
    } else {
        s
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, spec: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?} in {spec:?}")))
}

/// Resolves a group registry string.
pub fn group(spec: &str) -> Result<FiniteGroup> {
    let spec = strip_parens(spec);
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let g = match kind {
        "trivial" => FiniteGroup::trivial(),
        "klein" => klein(),
        "z2cubed" => z2cubed(),
        "cyclic" => {
            let n: usize = parse_num(arg, spec)?;
            if n == 0 {
                return Err(Error::Parse("cyclic group of order 0".into()));
            }
            FiniteGroup::cyclic(n)
        }
        "symmetric" => FiniteGroup::symmetric(parse_num(arg, spec)?)?,
        "dihedral" => FiniteGroup::dihedral(parse_num(arg, spec)?)?,
        "product" => {
            let parts = split_top_level(arg)?;
            if parts.len() < 2 {
                return Err(Error::Parse(format!("product needs at least two factors: {spec:?}")));
            }
            let mut acc = group(parts[0])?;
            for p in &parts[1..] {
                acc = FiniteGroup::product(&acc, &group(p)?);
            }
            acc.with_name(spec)
        }
        _ => return Err(Error::Parse(format!("unknown group {spec:?}"))),
    };
    Ok(g)
}

/// Resolves a cocycle registry string. Cocycles tied to a specific group
/// (`z2cubed-omega`, `klein-thetaV`, `cyclic3:n:k`) bring it along and must
/// match `group` when one is given; `trivial:n` needs `group`.
pub fn cocycle(spec: &str, group: Option<&FiniteGroup>) -> Result<(FiniteGroup, Cochain)> {
    let body = spec.strip_prefix("cocycle:").ok_or_else(|| Error::Parse(format!("not a cocycle spec: {spec:?}")))?;
    let parts: Vec<&str> = body.split(':').collect();
    let (g, c) = match parts.as_slice() {
        ["z2cubed-omega"] => z2cubed_omega(),
        ["klein-thetaV"] => klein_theta_v(),
        ["cyclic3", n, k] => {
            let n: usize = parse_num(n, spec)?;
            if n == 0 {
                return Err(Error::Parse("cyclic group of order 0".into()));
            }
            cyclic_omega(n, parse_num(k, spec)?)
        }
        ["trivial", n] => {
            let g = group.ok_or_else(|| Error::Parse(format!("{spec:?} needs a group")))?.clone();
            let c = on_delooping(&g, parse_num(n, spec)?, |_| Phase::ZERO);
            return Ok((g, c));
        }
        _ => return Err(Error::Parse(format!("unknown cocycle {spec:?}"))),
    };
    if let Some(given) = group {
        if given.table() != g.table() {
            return Err(Error::BaseMismatch);
        }
    }
    Ok((g, c))
}
