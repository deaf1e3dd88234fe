//! Finite groups stored as dense multiplication tables.
//!
//! `table[h][g]` is the product `h·g`, read as "apply `g` first, then `h`",
//! matching the right-to-left composition used for groupoids. Element `0` is
//! always the identity.

use crate::error::{Error, Result};

/// Largest order accepted for a dense table.
pub const MAX_ORDER: usize = 512;

/// A finite group presented by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: Option<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

/// Index of an element inside an ambient group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(usize);

impl GroupElement {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A subgroup materialized as its own [`FiniteGroup`], together with the
/// embedding of its element indices into the ambient group.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: FiniteGroup,
    pub embedding: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table: identity at index 0, Latin square,
    /// associativity (exhaustive), two-sided inverses.
    pub fn from_table(name: Option<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::InvalidGroup(format!(
                "order {n} exceeds the dense-table limit {MAX_ORDER}"
            )));
        }
        for (h, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {h} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidGroup(format!("entry {bad} in row {h} out of range")));
            }
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::InvalidGroup(format!(
                    "index 0 is not a two-sided identity (fails at {g})"
                )));
            }
        }
        let mut seen = vec![false; n];
        for h in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for g in 0..n {
                if std::mem::replace(&mut seen[table[h][g]], true) {
                    return Err(Error::InvalidGroup(format!("row {h} is not a permutation")));
                }
            }
            seen.iter_mut().for_each(|s| *s = false);
            for g in 0..n {
                if std::mem::replace(&mut seen[table[g][h]], true) {
                    return Err(Error::InvalidGroup(format!("column {h} is not a permutation")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        // Latin rows give a unique right inverse; the Latin columns and
        // associativity make it two-sided.
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| table[g][h] == 0).expect("Latin row contains 0"))
            .collect::<Vec<_>>();
        for g in 0..n {
            if table[inverse[g]][g] != 0 {
                return Err(Error::InvalidGroup(format!("element {g} has no two-sided inverse")));
            }
        }
        Ok(Self { name, table, inverse })
    }

    /// Builds a group from a binary operation on `0..n`; still fully validated.
    pub fn from_fn(name: impl Into<String>, n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..n).map(|h| (0..n).map(|g| op(h, g)).collect()).collect();
        Self::from_table(Some(name.into()), table)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        Self::from_fn(format!("Z{n}"), n, |a, b| (a + b) % n).expect("cyclic table is valid")
    }

    /// Direct product with lexicographic indexing, `a`-index major:
    /// `(i, j) ↦ i·|b| + j`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let nb = b.order();
        let name = format!("{}x{}", a.label(), b.label());
        Self::from_fn(name, a.order() * nb, |x, y| {
            a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
        })
        .expect("product of valid groups is valid")
    }

    /// The symmetric group `S_n`, permutations of `0..n` in lexicographic order.
    pub fn symmetric(n: usize) -> Result<Self> {
        if !(1..=5).contains(&n) {
            return Err(Error::UnsupportedSymmetric(n));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).expect("closed");
        let table = perms
            .iter()
            .map(|h| {
                perms
                    .iter()
                    .map(|g| index(&g.iter().map(|&i| h[i]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        Self::from_table(Some(format!("S{n}")), table)
    }

    /// The dihedral group of order `2n`; index `e·n + k` stands for `r^k s^e`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("dihedral group needs n >= 1".into()));
        }
        Self::from_fn(format!("D{n}"), 2 * n, |x, y| {
            let (e, a) = (x / n, x % n);
            let (f, b) = (y / n, y % n);
            let k = if e == 0 { a + b } else { a + n - b };
            ((e + f) % 2) * n + k % n
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("G{}", self.order()))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, h: usize, g: usize) -> usize {
        self.table[h][g]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// `h g h⁻¹`.
    #[inline]
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn element(&self, index: usize) -> Result<GroupElement> {
        if index < self.order() {
            Ok(GroupElement(index))
        } else {
            Err(Error::ElementOutOfRange { index, order: self.order() })
        }
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(g, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.commute(a, b)))
    }

    #[inline]
    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Conjugacy classes, each sorted, ordered by minimal element (identity first).
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|h| self.conjugate(h, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                assigned[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// The centralizer `C_x = {h : hx = xh}` as its own group.
    pub fn centralizer(&self, x: GroupElement) -> Subgroup {
        let members: Vec<usize> = (0..self.order()).filter(|&h| self.commute(h, x.0)).collect();
        self.subgroup(&members, format!("C({})", x.0))
            .expect("centralizer is a subgroup")
    }

    /// Materializes a subset closed under the product as a group. The subset
    /// must contain the identity; it is sorted so the identity lands at index 0.
    pub fn subgroup(&self, elements: &[usize], name: impl Into<String>) -> Result<Subgroup> {
        let mut embedding = elements.to_vec();
        embedding.sort_unstable();
        embedding.dedup();
        if embedding.first() != Some(&0) {
            return Err(Error::InvalidGroup("subgroup must contain the identity".into()));
        }
        let mut position = vec![usize::MAX; self.order()];
        for (i, &g) in embedding.iter().enumerate() {
            position[g] = i;
        }
        let mut table = Vec::with_capacity(embedding.len());
        for &h in &embedding {
            let mut row = Vec::with_capacity(embedding.len());
            for &g in &embedding {
                let p = position[self.mul(h, g)];
                if p == usize::MAX {
                    return Err(Error::InvalidGroup(format!(
                        "subset not closed: {h}·{g} = {}",
                        self.mul(h, g)
                    )));
                }
                row.push(p);
            }
            table.push(row);
        }
        let group = FiniteGroup::from_table(Some(name.into()), table)?;
        Ok(Subgroup { group, embedding })
    }

    /// All pairwise-commuting `k`-tuples in lexicographic order, `k ∈ {2, 3}`.
    pub fn commuting_tuples(&self, k: usize) -> Result<Vec<Vec<usize>>> {
        let n = self.order();
        match k {
            2 => Ok((0..n)
                .flat_map(|a| (0..n).filter(move |&b| self.commute(a, b)).map(move |b| vec![a, b]))
                .collect()),
            3 => {
                let mut out = Vec::new();
                for a in 0..n {
                    for b in (0..n).filter(|&b| self.commute(a, b)) {
                        for c in (0..n).filter(|&c| self.commute(a, c) && self.commute(b, c)) {
                            out.push(vec![a, b, c]);
                        }
                    }
                }
                Ok(out)
            }
            _ => Err(Error::UnsupportedArity(k)),
        }
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order()];
        span[0] = true;
        for g in 1..self.order() {
            if !span[g] {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(g, x);
                if !inside[y] {
                    inside[y] = true;
                    frontier.push(y);
                }
            }
        }
        inside
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
