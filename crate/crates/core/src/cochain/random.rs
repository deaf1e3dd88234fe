//! Seeded generators for cochains, cocycles and small groupoids.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cochain, Phase};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{retraction, same_groupoid, Groupoid, RetractionData};

const DENOMINATORS: [i64; 7] = [1, 2, 3, 4, 6, 8, 12];

pub fn random_phase(rng: &mut impl Rng) -> Phase {
    let q = *DENOMINATORS.choose(rng).unwrap();
    Phase::new(rng.random_range(0..q), q)
}

/// A random cochain with phases of denominator dividing 24. When
/// `normalized`, strings containing an identity get the trivial phase.
pub fn random_cochain(base: &Arc<Groupoid>, degree: usize, rng: &mut impl Rng, normalized: bool) -> Cochain {
    Cochain::from_fn(base, degree, |s| {
        if normalized && degree > 0 && s.iter().any(|&g| base.is_identity(g)) {
            Phase::ZERO
        } else {
            random_phase(rng)
        }
    })
}

/// `base · d(b)` for a random normalized `(degree-1)`-cochain `b`.
pub fn random_cocycle(g: &Arc<Groupoid>, degree: usize, seed: u64, base: Option<&Cochain>) -> Result<Cochain> {
    if degree == 0 {
        return Err(Error::Degree { expected: ">= 1".into(), found: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_cochain(g, degree - 1, &mut rng, true).coboundary();
    match base {
        None => Ok(b),
        Some(c) => {
            if !same_groupoid(c.base(), g) {
                return Err(Error::BaseMismatch);
            }
            &b * c
        }
    }
}

/// A random homomorphism into `ℤ/q`, as phases indexed by element, found
/// by assigning generator images and propagating; `None` if the draw is
/// inconsistent.
pub fn random_character(group: &FiniteGroup, q: i64, rng: &mut impl Rng) -> Option<Vec<Phase>> {
    let gens = group.generators();
    let images: Vec<Phase> = gens.iter().map(|_| Phase::new(rng.random_range(0..q), q)).collect();
    let mut chi: Vec<Option<Phase>> = vec![None; group.order()];
    chi[0] = Some(Phase::ZERO);
    let mut stack = vec![0];
    while let Some(h) = stack.pop() {
        for (&s, &v) in gens.iter().zip(&images) {
            let sh = group.mul(s, h);
            let val = v * chi[h].unwrap();
            match chi[sh] {
                None => {
                    chi[sh] = Some(val);
                    stack.push(sh);
                }
                Some(existing) if existing != val => return None,
                Some(_) => {}
            }
        }
    }
    chi.into_iter().collect()
}

/// A 1-cocycle with generally nontrivial holonomy: a random character of
/// each automorphism group pulled back along the retraction, times the
/// coboundary of a random 0-cochain.
pub fn random_flat_cocycle(g: &Arc<Groupoid>, seed: u64) -> Result<Cochain> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = RetractionData::default_for(g);
    let ret = retraction(g, &data)?;
    let mut hol = Vec::with_capacity(ret.union.num_morphisms());
    for &x in &data.basepoints {
        let (aut, _) = g.automorphism_group(x);
        let chi = (0..32)
            .find_map(|_| {
                let q = *[2i64, 3, 4, 6].choose(&mut rng).unwrap();
                random_character(&aut, q, &mut rng)
            })
            .unwrap_or_else(|| vec![Phase::ZERO; aut.order()]);
        hol.extend(chi);
    }
    let union_cocycle = Cochain::from_fn(&ret.union, 1, |s| hol[s[0]]);
    let pulled = union_cocycle.pullback(&ret.r)?;
    let shift = random_cochain(g, 0, &mut rng, false).coboundary();
    &pulled * &shift
}

fn small_groups() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        FiniteGroup::symmetric(3).unwrap(),
        FiniteGroup::dihedral(4).unwrap(),
    ]
}

/// The action groupoid of `G` on the left cosets of `⟨y⟩`.
fn coset_groupoid(group: &FiniteGroup, y: usize) -> Groupoid {
    let mut sub = vec![0];
    let mut p = y;
    while p != 0 {
        sub.push(p);
        p = group.mul(y, p);
    }
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for g in 0..group.order() {
        if coset_of[g] == usize::MAX {
            for &h in &sub {
                coset_of[group.mul(g, h)] = reps.len();
            }
            reps.push(g);
        }
    }
    Groupoid::action(group, reps.len(), |h, c| coset_of[group.mul(h, reps[c])]).expect("coset action")
}

/// A disjoint union of one to three transitive action groupoids of small
/// groups, with at most 12 objects in total.
pub fn random_groupoid(seed: u64) -> Groupoid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = small_groups();
    let pieces = rng.random_range(1..=3);
    let mut result: Option<Groupoid> = None;
    let mut objects = 0;
    for _ in 0..pieces {
        let group = groups.choose(&mut rng).unwrap();
        let y = rng.random_range(0..group.order());
        let mut piece = coset_groupoid(group, y);
        if objects + piece.num_objects() > 12 {
            piece = Groupoid::delooping(group);
        }
        objects += piece.num_objects();
        result = Some(match result {
            None => piece,
            Some(acc) => Groupoid::disjoint_union(&acc, &piece),
        });
    }
    result.unwrap()
}
