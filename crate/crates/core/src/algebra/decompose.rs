use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::character::{char_inner_product, character, TwistedCharacter};
use super::rep::{max_abs, regular_layout, AlgebraRep};
use super::TwistedAlgebra;
use crate::error::{Error, Result};

const ATTEMPTS: usize = 9;
const MERGE_TOL: f64 = 1e-9;
const GAP_FLOOR: f64 = 1e-8;
const CHAR_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Irrep {
    pub rep: AlgebraRep,
    pub character: TwistedCharacter,
}

impl Irrep {
    pub fn dimension(&self) -> usize {
        self.rep.dimension()
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Pairwise inequivalent irreducibles, sorted by dimension and then by
    /// character values.
    pub irreps: Vec<Irrep>,
    pub center_dimension: usize,
    pub algebra_dimension: usize,
}

impl Decomposition {
    /// Irrep dimension ↦ number of irreps of that dimension.
    pub fn dimension_multiset(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for ir in &self.irreps {
            *m.entry(ir.dimension()).or_insert(0) += 1;
        }
        m
    }
}

enum Attempt {
    Done(Vec<Irrep>),
    Retry,
}

/// Splits the regular representation into irreducibles. Eigenspaces of a
/// random self-adjoint combination `B + B*` of right multiplications are
/// irreducible submodules; they are grouped by character. Each draw that
/// shows near-degenerate eigenvalues or a failed check is replaced by a
/// fresh one from the same seeded stream.
pub fn decompose(alg: &TwistedAlgebra, seed: u64) -> Result<Decomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let regular = AlgebraRep::regular(alg);
    let center = alg.center_dimension();
    for _ in 0..ATTEMPTS {
        if let Attempt::Done(mut irreps) = attempt(alg, &regular, &mut rng)? {
            let sum_sq: usize = irreps.iter().map(|i| i.dimension().pow(2)).sum();
            if sum_sq != alg.dimension() {
                return Err(Error::CrossCheck(format!("Σd² = {sum_sq} but the algebra has dimension {}", alg.dimension())));
            }
            if irreps.len() != center {
                return Err(Error::CrossCheck(format!("{} irreps but center of dimension {center}", irreps.len())));
            }
            irreps.sort_by_cached_key(|i| (i.dimension(), rounded(&i.character)));
            return Ok(Decomposition { irreps, center_dimension: center, algebra_dimension: alg.dimension() });
        }
    }
    Err(Error::RetryExhausted(ATTEMPTS))
}

fn rounded(c: &TwistedCharacter) -> Vec<(i64, i64)> {
    let r = |x: f64| {
        let v = (x * 1e6).round() as i64;
        if v == 0 { 0 } else { v }
    };
    c.values().iter().map(|z| (r(z.re), r(z.im))).collect()
}

fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn attempt(alg: &TwistedAlgebra, regular: &AlgebraRep, rng: &mut impl Rng) -> Result<Attempt> {
    let g = alg.base();
    let (dims, pos) = regular_layout(alg);
    let coeffs: Vec<Complex64> = (0..alg.dimension()).map(|_| random_complex(rng)).collect();

    // B = Σ c_b R_b and its partner Σ conj(c_b) R_{⟨b⟩*}, object by object.
    let mut b_mat: Vec<DMatrix<Complex64>> = dims.iter().map(|&d| DMatrix::zeros(d, d)).collect();
    let mut b_star: Vec<DMatrix<Complex64>> = b_mat.clone();
    for (b, c) in coeffs.iter().enumerate() {
        let (sp, bi) = alg.star(b);
        let s = sp.to_complex();
        for &k in g.out_morphisms(g.dst(b)) {
            let (p, kb) = alg.product(k, b).unwrap();
            b_mat[g.dst(k)][(pos[kb], pos[k])] += c * p.to_complex();
        }
        for &k in g.out_morphisms(g.dst(bi)) {
            let (p, kb) = alg.product(k, bi).unwrap();
            b_star[g.dst(k)][(pos[kb], pos[k])] += c.conj() * s * p.to_complex();
        }
    }
    let mut eig = Vec::new();
    for (x, (b, bs)) in b_mat.iter().zip(&b_star).enumerate() {
        if dims[x] == 0 {
            continue;
        }
        let h = b + bs;
        let scale = max_abs(&h).max(1.0);
        if max_abs(&(b.adjoint() - bs)) > 1e-9 * scale {
            return Err(Error::CrossCheck("star structure is not the adjoint for right multiplication".into()));
        }
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let se = SymmetricEigen::new(h);
        for (i, &lam) in se.eigenvalues.iter().enumerate() {
            eig.push((lam, x, se.eigenvectors.column(i).into_owned()));
        }
    }
    eig.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = eig.iter().map(|e| e.0.abs()).fold(1.0, f64::max);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..eig.len() {
        if i > 0 {
            let gap = eig[i].0 - eig[i - 1].0;
            if gap <= MERGE_TOL * scale {
                clusters.last_mut().unwrap().push(i);
                continue;
            }
            if gap < GAP_FLOOR * scale {
                return Ok(Attempt::Retry);
            }
        }
        clusters.push(vec![i]);
    }

    let mut pieces: Vec<Irrep> = Vec::with_capacity(clusters.len());
    for cl in &clusters {
        let mut q: Vec<DMatrix<Complex64>> = Vec::with_capacity(dims.len());
        for x in 0..dims.len() {
            let cols: Vec<_> = cl.iter().filter(|&&i| eig[i].1 == x).map(|&i| eig[i].2.clone()).collect();
            q.push(if cols.is_empty() { DMatrix::zeros(dims[x], 0) } else { DMatrix::from_columns(&cols) });
        }
        let mut blocks = Vec::with_capacity(g.num_morphisms());
        for m in 0..g.num_morphisms() {
            let (y, z) = (g.src(m), g.dst(m));
            let image = regular.block(m) * &q[y];
            let block = q[z].adjoint() * &image;
            if max_abs(&(image - &q[z] * &block)) > GAP_FLOOR {
                return Ok(Attempt::Retry);
            }
            blocks.push(block);
        }
        let Ok(rep) = AlgebraRep::new(alg, q.iter().map(|m| m.ncols()).collect(), blocks) else {
            return Ok(Attempt::Retry);
        };
        let chi = character(alg, &rep)?;
        let norm = char_inner_product(&chi, &chi)?;
        if (norm - 1.0).norm() > CHAR_TOL {
            return Ok(Attempt::Retry);
        }
        pieces.push(Irrep { rep, character: chi });
    }

    // Isotypic classes: the regular representation holds d copies of each
    // d-dimensional irreducible.
    let mut classes: Vec<(Irrep, usize)> = Vec::new();
    for p in pieces {
        match classes.iter_mut().find(|(c, _)| c.character.distance(&p.character) < CHAR_TOL) {
            Some((_, count)) => *count += 1,
            None => classes.push((p, 1)),
        }
    }
    if classes.iter().any(|(c, count)| c.dimension() != *count) {
        return Ok(Attempt::Retry);
    }
    Ok(Attempt::Done(classes.into_iter().map(|(c, _)| c).collect()))
}
