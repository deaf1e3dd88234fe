//! Exact ℚ/ℤ-valued cochains on finite groupoids.
//!
//! An `n`-cochain is stored densely, keyed by composable strings
//! `[g_n, …, g_1]` (see [`Groupoid::simplex_slot`]); a 0-cochain is keyed
//! by objects.

mod correction;
pub mod phase;
pub mod random;
mod transgress;

use std::ops::{Div, Mul};
use std::sync::Arc;

pub use correction::epsilon_correction;
pub use phase::Phase;
pub use transgress::transgress_at;

use crate::error::{Error, Result};
use crate::groupoid::{same_groupoid, Groupoid, GroupoidFunctor};

#[derive(Clone, Debug)]
pub struct Cochain {
    base: Arc<Groupoid>,
    degree: usize,
    values: Vec<Phase>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.values == other.values && same_groupoid(&self.base, &other.base)
    }
}

impl Cochain {
    /// Tabulates `f` on every composable `degree`-string.
    pub fn from_fn(base: &Arc<Groupoid>, degree: usize, mut f: impl FnMut(&[usize]) -> Phase) -> Self {
        let mut values = vec![Phase::ZERO; base.simplex_slots(degree)];
        if degree == 0 {
            for (x, v) in values.iter_mut().enumerate() {
                *v = f(&[x]);
            }
        } else {
            base.for_each_simplex(degree, |s| values[base.simplex_slot(s)] = f(s));
        }
        Self { base: base.clone(), degree, values }
    }

    pub fn trivial(base: &Arc<Groupoid>, degree: usize) -> Self {
        Self { base: base.clone(), degree, values: vec![Phase::ZERO; base.simplex_slots(degree)] }
    }

    pub fn base(&self) -> &Arc<Groupoid> {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Value on `[g_n, …, g_1]`, or on `[x]` for a 0-cochain.
    #[inline]
    pub fn value(&self, simplex: &[usize]) -> Phase {
        debug_assert_eq!(simplex.len(), self.degree.max(1));
        if self.degree == 0 {
            self.values[simplex[0]]
        } else {
            debug_assert!(self.base.is_composable(simplex));
            self.values[self.base.simplex_slot(simplex)]
        }
    }

    /// Calls `f` with every simplex and its value.
    pub fn for_each(&self, mut f: impl FnMut(&[usize], Phase)) {
        self.base.for_each_simplex(self.degree, |s| f(s, self.value(s)));
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_trivial())
    }

    pub fn inv(&self) -> Self {
        Self { base: self.base.clone(), degree: self.degree, values: self.values.iter().map(|v| v.inv()).collect() }
    }

    /// `dc` evaluated on one `(n+1)`-string `[a_0, …, a_n]`: the faces drop
    /// `a_0`, merge `a_{j-1} ∘ a_j`, and drop `a_n`, with alternating signs.
    pub fn coboundary_at(&self, a: &[usize]) -> Phase {
        let n = self.degree;
        debug_assert_eq!(a.len(), n + 1);
        let g = &self.base;
        if n == 0 {
            return self.values[g.src(a[0])] / self.values[g.dst(a[0])];
        }
        let mut acc = self.value(&a[1..]);
        let mut buf = Vec::with_capacity(n);
        for j in 1..=n {
            buf.clear();
            buf.extend_from_slice(&a[..j - 1]);
            buf.push(g.compose_unchecked(a[j - 1], a[j]));
            buf.extend_from_slice(&a[j + 1..]);
            acc = acc * self.value(&buf).signed(j % 2 == 1);
        }
        acc * self.value(&a[..n]).signed((n + 1) % 2 == 1)
    }

    pub fn coboundary(&self) -> Cochain {
        Cochain::from_fn(&self.base, self.degree + 1, |s| self.coboundary_at(s))
    }

    /// The first string on which `dc` is nontrivial.
    pub fn cocycle_violation(&self) -> Option<Vec<usize>> {
        let mut witness = None;
        self.base.for_each_simplex(self.degree + 1, |s| {
            if witness.is_none() && !self.coboundary_at(s).is_trivial() {
                witness = Some(s.to_vec());
            }
        });
        witness
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_violation().is_none()
    }

    pub fn require_cocycle(&self) -> Result<()> {
        self.cocycle_violation().map_or(Ok(()), |w| Err(Error::NotCocycle(w)))
    }

    /// The first string containing an identity on which `c` is nontrivial.
    pub fn normalization_violation(&self) -> Option<Vec<usize>> {
        if self.degree == 0 {
            return None;
        }
        let mut witness = None;
        self.for_each(|s, v| {
            if witness.is_none() && !v.is_trivial() && s.iter().any(|&g| self.base.is_identity(g)) {
                witness = Some(s.to_vec());
            }
        });
        witness
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization_violation().is_none()
    }

    pub fn require_normalized(&self) -> Result<()> {
        self.normalization_violation().map_or(Ok(()), |w| Err(Error::NotNormalized(w)))
    }

    /// `f*c`, defined on the source of `f`.
    pub fn pullback(&self, f: &GroupoidFunctor) -> Result<Cochain> {
        if !same_groupoid(f.target(), &self.base) {
            return Err(Error::BaseMismatch);
        }
        let mut buf = Vec::with_capacity(self.degree.max(1));
        Ok(Cochain::from_fn(f.source(), self.degree, |s| {
            buf.clear();
            if self.degree == 0 {
                buf.push(f.object(s[0]));
            } else {
                buf.extend(s.iter().map(|&g| f.morphism(g)));
            }
            self.value(&buf)
        }))
    }

    fn zip(&self, other: &Cochain, op: impl Fn(Phase, Phase) -> Phase) -> Result<Cochain> {
        if self.degree != other.degree {
            return Err(Error::Degree { expected: self.degree.to_string(), found: other.degree });
        }
        if !same_groupoid(&self.base, &other.base) {
            return Err(Error::BaseMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        Ok(Cochain { base: self.base.clone(), degree: self.degree, values })
    }
}

impl Mul for &Cochain {
    type Output = Result<Cochain>;

    fn mul(self, rhs: &Cochain) -> Result<Cochain> {
        self.zip(rhs, |a, b| a * b)
    }
}

impl Div for &Cochain {
    type Output = Result<Cochain>;

    fn div(self, rhs: &Cochain) -> Result<Cochain> {
        self.zip(rhs, |a, b| a / b)
    }
}
