use std::collections::VecDeque;

use crate::cochain::{Cochain, Phase};
use crate::cyclotomic::integrate;
use crate::error::{Error, Result};
use crate::groupoid::LoopGroupoid;

/// Flat sections of the line bundle of a 1-cocycle `α`: functions `s` on
/// objects with `α(f)·s(x₁) = s(x₂)` for every `f: x₁ → x₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSections {
    pub dimension: usize,
    /// One basis section per component with trivial holonomy, supported on
    /// that component (`None` meaning 0 elsewhere).
    pub basis: Vec<Vec<Option<Phase>>>,
}

/// Solves for the flat sections exactly and checks the dimension against
/// `∫_{Λ𝒢} τ(α)`.
pub fn flat_sections(alpha: &Cochain) -> Result<FlatSections> {
    if alpha.degree() != 1 {
        return Err(Error::Degree { expected: "1".into(), found: alpha.degree() });
    }
    alpha.require_cocycle()?;
    let g = alpha.base();
    let mut basis = Vec::new();
    for comp in g.components() {
        let mut s: Vec<Option<Phase>> = vec![None; g.num_objects()];
        s[comp[0]] = Some(Phase::ZERO);
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(y) = queue.pop_front() {
            for &f in g.out_morphisms(y) {
                let z = g.dst(f);
                if s[z].is_none() {
                    s[z] = Some(alpha.value(&[f]) * s[y].unwrap());
                    queue.push_back(z);
                }
            }
        }
        let flat = comp.iter().flat_map(|&y| g.out_morphisms(y)).all(|&f| {
            alpha.value(&[f]) * s[g.src(f)].unwrap() == s[g.dst(f)].unwrap()
        });
        if flat {
            basis.push(s);
        }
    }
    let lg = LoopGroupoid::new(g.clone());
    let expected = integrate(&alpha.transgress(&lg)?)?.as_integer()?;
    if expected != basis.len() as i64 {
        return Err(Error::CrossCheck(format!("{} flat sections but ∫τα = {expected}", basis.len())));
    }
    Ok(FlatSections { dimension: basis.len(), basis })
}
