use std::sync::Arc;

use super::{Cochain, Phase};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::groupoid::{same_groupoid, Groupoid, LoopGroupoid};

impl Cochain {
    /// The transgression `τ(c)` of an `n`-cocycle, an `(n-1)`-cocycle on the
    /// loop groupoid:
    ///
    /// `τ(c)([g_{n-1}|…|g_1]γ) = Π_i c([g_{n-1}|…|g_{i+1}|γ_i|g_i|…|g_1])^{(-1)^{n-1-i}}`
    ///
    /// where `γ_i` is the loop sitting at vertex `i` of the string. Both the
    /// input and the output are checked to be cocycles.
    pub fn transgress(&self, lg: &LoopGroupoid) -> Result<Cochain> {
        if self.degree == 0 {
            return Err(Error::Degree { expected: ">= 1".into(), found: 0 });
        }
        if !same_groupoid(lg.base(), &self.base) {
            return Err(Error::BaseMismatch);
        }
        self.require_cocycle()?;
        let out = self.transgress_unchecked(lg);
        if let Some(w) = out.cocycle_violation() {
            return Err(Error::CrossCheck(format!("transgression is not closed on {w:?}")));
        }
        Ok(out)
    }

    /// [`Self::transgress`] without the cocycle checks.
    pub fn transgress_unchecked(&self, lg: &LoopGroupoid) -> Cochain {
        let n = self.degree;
        assert!(n >= 1, "transgression needs degree >= 1");
        let base = &self.base;
        let lgg = lg.groupoid();
        let mut buf = Vec::with_capacity(n);
        Cochain::from_fn(lgg, n - 1, |ks| {
            if n == 1 {
                return self.value(&[lg.object_loop(ks[0])]);
            }
            // ks = [k_{n-1}, …, k_1]; gs[j] is the base morphism under ks[j].
            let loop_at = |i: usize| -> usize {
                if i < n - 1 {
                    lg.object_loop(lg.label(ks[n - 2 - i]).1)
                } else {
                    lg.object_loop(lgg.dst(ks[0]))
                }
            };
            let mut acc = Phase::ZERO;
            for i in 0..n {
                buf.clear();
                buf.extend(ks[..n - 1 - i].iter().map(|&k| lg.label(k).0));
                buf.push(loop_at(i));
                buf.extend(ks[n - 1 - i..].iter().map(|&k| lg.label(k).0));
                debug_assert!(base.is_composable(&buf));
                acc = acc * self.value(&buf).signed((n - 1 - i) % 2 == 1);
            }
            acc
        })
    }
}

/// The pointed transgression at `x` of a cocycle on `Ḡ`, a cochain on the
/// delooped centralizer `C_x`. In degree 2 this is `g ↦ θ(x,g)/θ(g,x)`, in
/// degree 3 `(h,g) ↦ ω(h,g,x)ω(x,h,g)/ω(h,x,g)`. It agrees with the
/// restriction of [`Cochain::transgress`] to the loops at `x`.
pub fn transgress_at(c: &Cochain, group: &FiniteGroup, x: usize) -> Result<(Subgroup, Cochain)> {
    if !matches!(c.degree, 2 | 3) {
        return Err(Error::Degree { expected: "2 or 3".into(), found: c.degree });
    }
    if *c.base != Groupoid::delooping(group) {
        return Err(Error::BaseMismatch);
    }
    let xe = group.element(x)?;
    c.require_cocycle()?;
    let sub = group.centralizer(xe);
    let emb = &sub.embedding;
    let target = Arc::new(Groupoid::delooping(&sub.group));
    let out = if c.degree == 2 {
        Cochain::from_fn(&target, 1, |s| {
            let g = emb[s[0]];
            c.value(&[x, g]) / c.value(&[g, x])
        })
    } else {
        Cochain::from_fn(&target, 2, |s| {
            let (h, g) = (emb[s[0]], emb[s[1]]);
            c.value(&[h, g, x]) * c.value(&[x, h, g]) / c.value(&[h, x, g])
        })
    };
    Ok((sub, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::random::random_cocycle;
    use crate::groupoid::GroupoidFunctor;

    fn s3_setup() -> (FiniteGroup, Arc<Groupoid>, LoopGroupoid) {
        let g = FiniteGroup::symmetric(3).unwrap();
        let b = Arc::new(Groupoid::delooping(&g));
        let lg = LoopGroupoid::new(b.clone());
        (g, b, lg)
    }

    #[test]
    fn degree_one_reads_the_loop() {
        let (_, b, lg) = s3_setup();
        let alpha = random_cocycle(&b, 1, 4, None).unwrap();
        let t = alpha.transgress(&lg).unwrap();
        assert_eq!(t.degree(), 0);
        for o in 0..6 {
            assert_eq!(t.value(&[o]), alpha.value(&[lg.object_loop(o)]));
        }
    }

    #[test]
    fn degree_two_closed_form() {
        let (g, b, lg) = s3_setup();
        let theta = random_cocycle(&b, 2, 9, None).unwrap();
        let t = theta.transgress(&lg).unwrap();
        t.for_each(|s, v| {
            let (h, o) = lg.label(s[0]);
            let gamma = lg.object_loop(o);
            let expect = theta.value(&[g.conjugate(h, gamma), h]) / theta.value(&[h, gamma]);
            assert_eq!(v, expect);
        });
        assert!(t.is_normalized());
    }

    #[test]
    fn degree_three_closed_form() {
        let (g, b, lg) = s3_setup();
        let omega = random_cocycle(&b, 3, 2, None).unwrap();
        let t = omega.transgress(&lg).unwrap();
        t.for_each(|s, v| {
            let (k2, k1) = (s[0], s[1]);
            let (gg, o) = lg.label(k1);
            let (h, _) = lg.label(k2);
            let gamma = lg.object_loop(o);
            let conj = g.conjugate(gg, gamma);
            let expect = omega.value(&[h, gg, gamma]) * omega.value(&[g.conjugate(h, conj), h, gg])
                / omega.value(&[h, conj, gg]);
            assert_eq!(v, expect);
        });
    }

    #[test]
    fn rejects_non_cocycles_and_degree_zero() {
        let (_, b, lg) = s3_setup();
        let c = Cochain::from_fn(&b, 2, |s| if s == [1, 2] { Phase::HALF } else { Phase::ZERO });
        assert!(matches!(c.transgress(&lg), Err(Error::NotCocycle(_))));
        assert!(Cochain::trivial(&b, 0).transgress(&lg).is_err());
    }

    #[test]
    fn pointed_matches_restriction() {
        let (g, b, lg) = s3_setup();
        for seed in 0..3 {
            for n in [2, 3] {
                let c = random_cocycle(&b, n, seed, None).unwrap();
                let t = c.transgress(&lg).unwrap();
                for x in 0..g.order() {
                    let (sub, tx) = transgress_at(&c, &g, x).unwrap();
                    let src = tx.base().clone();
                    let morphs = sub.embedding.iter().map(|&h| lg.morphism_for(h, x).unwrap()).collect();
                    let inc = GroupoidFunctor::new(src, lg.groupoid().clone(), vec![x], morphs).unwrap();
                    assert_eq!(t.pullback(&inc).unwrap(), tx);
                }
            }
        }
    }

    #[test]
    fn pointed_at_identity_is_trivial() {
        let (g, b, _) = s3_setup();
        let c = random_cocycle(&b, 2, 8, None).unwrap();
        assert!(transgress_at(&c, &g, 0).unwrap().1.is_trivial());
        assert!(transgress_at(&Cochain::trivial(&b, 1), &g, 0).is_err());
    }
}
