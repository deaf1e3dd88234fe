//! Finite groupoids with materialized composition.
//!
//! Morphisms and objects are dense indices. Composition is written
//! `compose(m2, m1) = m2 ∘ m1` with `m1` applied first, so a composable
//! string `x_n ← … ← x_0` is the slice `[g_n, …, g_1]`.
//!
//! Composition is stored as `compose[m1][out_position(m2)]`: for each `m1`
//! only the morphisms leaving `dst(m1)` can follow it, which keeps the table
//! at `|Mor| × max out-degree` rather than `|Mor|²`.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    src: Vec<usize>,
    dst: Vec<usize>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    out: Vec<Vec<usize>>,
    out_pos: Vec<usize>,
    compose: Vec<Vec<usize>>,
}

impl Groupoid {
    /// Builds and validates a groupoid from morphism endpoints `(src, dst)`
    /// and a composition rule `compose(m2, m1)`, only queried when
    /// `dst(m1) = src(m2)`. Identities and inverses are recovered from the
    /// composition and all groupoid laws are checked exhaustively.
    pub fn from_fn(
        num_objects: usize,
        ends: Vec<(usize, usize)>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let bad = |msg: String| Error::InvalidGroupoid(msg);
        let m = ends.len();
        if let Some((i, _)) = ends.iter().enumerate().find(|(_, &(s, d))| s >= num_objects || d >= num_objects) {
            return Err(bad(format!("morphism {i} has an endpoint out of range")));
        }
        let src: Vec<usize> = ends.iter().map(|e| e.0).collect();
        let dst: Vec<usize> = ends.iter().map(|e| e.1).collect();
        let mut out = vec![Vec::new(); num_objects];
        let mut out_pos = vec![0; m];
        for g in 0..m {
            out_pos[g] = out[src[g]].len();
            out[src[g]].push(g);
        }
        let mut table = Vec::with_capacity(m);
        for m1 in 0..m {
            let mut row = Vec::with_capacity(out[dst[m1]].len());
            for &m2 in &out[dst[m1]] {
                let r = compose(m2, m1);
                if r >= m || src[r] != src[m1] || dst[r] != dst[m2] {
                    return Err(bad(format!("composite of ({m2}, {m1}) has wrong endpoints")));
                }
                row.push(r);
            }
            table.push(row);
        }
        let mut g = Self {
            src,
            dst,
            identity: Vec::new(),
            inverse: Vec::new(),
            out,
            out_pos,
            compose: table,
        };
        for x in 0..num_objects {
            let idem: Vec<usize> = g.out[x]
                .iter()
                .copied()
                .filter(|&e| g.dst[e] == x && g.compose_unchecked(e, e) == e)
                .collect();
            match idem.as_slice() {
                [e] => g.identity.push(*e),
                [] => return Err(bad(format!("object {x} has no identity"))),
                _ => return Err(bad(format!("object {x} has several idempotents"))),
            }
        }
        for h in 0..m {
            if g.compose_unchecked(g.identity[g.dst[h]], h) != h || g.compose_unchecked(h, g.identity[g.src[h]]) != h {
                return Err(bad(format!("identity law fails for morphism {h}")));
            }
        }
        for a in 0..m {
            for &b in &g.out[g.dst[a]] {
                let ba = g.compose_unchecked(b, a);
                for &c in &g.out[g.dst[b]] {
                    if g.compose_unchecked(c, ba) != g.compose_unchecked(g.compose_unchecked(c, b), a) {
                        return Err(bad(format!("associativity fails on ({c}, {b}, {a})")));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(m);
        for h in 0..m {
            let inv = g.out[g.dst[h]].iter().copied().find(|&k| {
                g.compose_unchecked(k, h) == g.identity[g.src[h]] && g.compose_unchecked(h, k) == g.identity[g.dst[h]]
            });
            inverse.push(inv.ok_or_else(|| bad(format!("morphism {h} is not invertible")))?);
        }
        g.inverse = inverse;
        Ok(g)
    }

    /// Builds a groupoid from a dense table `table[m2][m1]`, `-1` where the
    /// pair is not composable. Undefined entries must match exactly the
    /// non-composable pairs.
    pub fn from_compose_table(num_objects: usize, ends: Vec<(usize, usize)>, table: &[Vec<i64>]) -> Result<Self> {
        let m = ends.len();
        if table.len() != m || table.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidGroupoid(format!("compose table must be {m}×{m}")));
        }
        for m2 in 0..m {
            for m1 in 0..m {
                let composable = ends[m1].1 == ends[m2].0;
                let v = table[m2][m1];
                if composable && v < 0 {
                    return Err(Error::InvalidGroupoid(format!("({m2}, {m1}) composable but undefined")));
                }
                if !composable && v >= 0 {
                    return Err(Error::InvalidGroupoid(format!("({m2}, {m1}) not composable but defined")));
                }
            }
        }
        Self::from_fn(num_objects, ends, |m2, m1| table[m2][m1] as usize)
    }

    /// The one-object groupoid `Ḡ`; morphism ids are element indices.
    pub fn delooping(g: &FiniteGroup) -> Self {
        Self::from_fn(1, vec![(0, 0); g.order()], |h, k| g.mul(h, k)).expect("delooping is a groupoid")
    }

    /// The action groupoid of a left action on `0..num_points`. The morphism
    /// `(g, x): x → g·x` has id `x·|G| + g`.
    pub fn action(g: &FiniteGroup, num_points: usize, act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = g.order();
        let table: Vec<Vec<usize>> = (0..n).map(|h| (0..num_points).map(|x| act(h, x)).collect()).collect();
        for x in 0..num_points {
            if table[0][x] != x {
                return Err(Error::InvalidAction(format!("identity moves point {x}")));
            }
            for h in 0..n {
                if table[h][x] >= num_points {
                    return Err(Error::InvalidAction(format!("{h}·{x} is out of range")));
                }
                for k in 0..n {
                    if table[h][table[k][x]] != table[g.mul(h, k)][x] {
                        return Err(Error::InvalidAction(format!("compatibility fails for ({h}, {k}, {x})")));
                    }
                }
            }
        }
        let ends = (0..num_points)
            .flat_map(|x| (0..n).map(move |h| (x, h)))
            .map(|(x, h)| (x, table[h][x]))
            .collect();
        Self::from_fn(num_points, ends, |m2, m1| {
            let (x, h1, h2) = (m1 / n, m1 % n, m2 % n);
            x * n + g.mul(h2, h1)
        })
    }

    /// `G` acting on itself by conjugation.
    pub fn conjugation(g: &FiniteGroup) -> Self {
        Self::action(g, g.order(), |h, x| g.conjugate(h, x)).expect("conjugation is an action")
    }

    /// `G` acting on itself by left translation.
    pub fn left_translation(g: &FiniteGroup) -> Self {
        Self::action(g, g.order(), |h, x| g.mul(h, x)).expect("translation is an action")
    }

    /// Objects of `a` come first, then those of `b`; likewise for morphisms.
    pub fn disjoint_union(a: &Groupoid, b: &Groupoid) -> Self {
        let (na, ma) = (a.num_objects(), a.num_morphisms());
        let ends = (0..ma)
            .map(|g| (a.src(g), a.dst(g)))
            .chain((0..b.num_morphisms()).map(|g| (b.src(g) + na, b.dst(g) + na)))
            .collect();
        Self::from_fn(na + b.num_objects(), ends, |m2, m1| {
            if m1 < ma {
                a.compose_unchecked(m2, m1)
            } else {
                b.compose_unchecked(m2 - ma, m1 - ma) + ma
            }
        })
        .expect("disjoint union of groupoids")
    }

    pub fn num_objects(&self) -> usize {
        self.out.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.src.len()
    }

    #[inline]
    pub fn src(&self, g: usize) -> usize {
        self.src[g]
    }

    #[inline]
    pub fn dst(&self, g: usize) -> usize {
        self.dst[g]
    }

    #[inline]
    pub fn id(&self, x: usize) -> usize {
        self.identity[x]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    #[inline]
    pub fn is_identity(&self, g: usize) -> bool {
        self.identity[self.src[g]] == g
    }

    #[inline]
    pub fn is_loop(&self, g: usize) -> bool {
        self.src[g] == self.dst[g]
    }

    /// `m2 ∘ m1` if `dst(m1) = src(m2)`.
    #[inline]
    pub fn compose(&self, m2: usize, m1: usize) -> Option<usize> {
        (self.dst[m1] == self.src[m2]).then(|| self.compose[m1][self.out_pos[m2]])
    }

    /// `m2 ∘ m1`; the caller guarantees composability.
    #[inline]
    pub fn compose_unchecked(&self, m2: usize, m1: usize) -> usize {
        debug_assert_eq!(self.dst[m1], self.src[m2]);
        self.compose[m1][self.out_pos[m2]]
    }

    /// `g γ g⁻¹` for a loop `γ` at `src(g)`.
    pub fn conjugate(&self, g: usize, gamma: usize) -> usize {
        self.compose_unchecked(self.compose_unchecked(g, gamma), self.inv(g))
    }

    /// Morphisms with source `x`, ascending.
    pub fn out_morphisms(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    /// `|x→|`, the number of morphisms leaving `x`.
    pub fn out_degree(&self, x: usize) -> usize {
        self.out[x].len()
    }

    /// Position of `g` in the out-list of its source.
    pub fn out_position(&self, g: usize) -> usize {
        self.out_pos[g]
    }

    pub fn max_out_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[x].iter().copied().filter(move |&g| self.dst[g] == y)
    }

    /// All self-morphisms, ascending.
    pub fn loops(&self) -> Vec<usize> {
        (0..self.num_morphisms()).filter(|&g| self.is_loop(g)).collect()
    }

    /// Self-morphisms of `x`, identity first then ascending.
    pub fn automorphisms(&self, x: usize) -> Vec<usize> {
        let e = self.id(x);
        std::iter::once(e)
            .chain(self.out[x].iter().copied().filter(|&g| self.dst[g] == x && g != e))
            .collect()
    }

    /// `Aut(x)` as a group, plus the map from group index to morphism id.
    pub fn automorphism_group(&self, x: usize) -> (FiniteGroup, Vec<usize>) {
        let autos = self.automorphisms(x);
        let mut pos = std::collections::HashMap::with_capacity(autos.len());
        for (i, &a) in autos.iter().enumerate() {
            pos.insert(a, i);
        }
        let table = autos
            .iter()
            .map(|&h| autos.iter().map(|&g| pos[&self.compose_unchecked(h, g)]).collect())
            .collect();
        let group = FiniteGroup::from_table(Some(format!("Aut({x})")), table).expect("automorphisms form a group");
        (group, autos)
    }

    /// Connected components, each sorted, ordered by minimal object.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.num_objects()];
        let mut comps = Vec::new();
        for start in 0..self.num_objects() {
            if label[start] != usize::MAX {
                continue;
            }
            let c = comps.len();
            let mut members = vec![start];
            label[start] = c;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &g in &self.out[x] {
                    let y = self.dst[g];
                    if label[y] == usize::MAX {
                        label[y] = c;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }

    /// Component index of every object, consistent with [`Self::components`].
    pub fn component_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.num_objects()];
        for (c, members) in self.components().iter().enumerate() {
            for &x in members {
                idx[x] = c;
            }
        }
        idx
    }

    /// Number of slots in a dense table of `n`-simplices; see [`Self::simplex_slot`].
    pub fn simplex_slots(&self, n: usize) -> usize {
        if n == 0 {
            self.num_objects()
        } else {
            self.num_morphisms() * self.max_out_degree().pow(n as u32 - 1)
        }
    }

    /// Dense slot of a composable string `[g_n, …, g_1]`; for `n = 0` the
    /// slice holds a single object id.
    #[inline]
    pub fn simplex_slot(&self, simplex: &[usize]) -> usize {
        let n = simplex.len();
        if n == 0 {
            return 0;
        }
        let d = self.max_out_degree();
        let mut slot = simplex[n - 1];
        for &g in simplex[..n - 1].iter().rev() {
            slot = slot * d + self.out_pos[g];
        }
        slot
    }

    pub fn is_composable(&self, simplex: &[usize]) -> bool {
        simplex.windows(2).all(|w| self.src[w[0]] == self.dst[w[1]])
    }

    /// Calls `f` on every composable `n`-string `[g_n, …, g_1]` (objects
    /// `[x]` when `n = 0`), in increasing slot order of `g_1` first.
    pub fn for_each_simplex(&self, n: usize, mut f: impl FnMut(&[usize])) {
        if n == 0 {
            for x in 0..self.num_objects() {
                f(&[x]);
            }
            return;
        }
        let mut buf = vec![0usize; n];
        for g1 in 0..self.num_morphisms() {
            buf[n - 1] = g1;
            self.extend_simplex(&mut buf, n - 1, &mut f);
        }
    }

    fn extend_simplex(&self, buf: &mut [usize], filled_from: usize, f: &mut impl FnMut(&[usize])) {
        if filled_from == 0 {
            f(buf);
            return;
        }
        let prev = buf[filled_from];
        for &g in &self.out[self.dst[prev]] {
            buf[filled_from - 1] = g;
            self.extend_simplex(buf, filled_from - 1, f);
        }
    }

    /// Objects at the vertices `x_0, …, x_n` of a string `[g_n, …, g_1]`.
    pub fn vertices(&self, simplex: &[usize]) -> Vec<usize> {
        let n = simplex.len();
        let mut v = vec![self.src[simplex[n - 1]]];
        v.extend(simplex.iter().rev().map(|&g| self.dst[g]));
        v
    }
}

/// A functor between finite groupoids, validated on construction.
#[derive(Debug, Clone)]
pub struct GroupoidFunctor {
    source: Arc<Groupoid>,
    target: Arc<Groupoid>,
    object_map: Vec<usize>,
    morphism_map: Vec<usize>,
}

impl GroupoidFunctor {
    pub fn new(
        source: Arc<Groupoid>,
        target: Arc<Groupoid>,
        object_map: Vec<usize>,
        morphism_map: Vec<usize>,
    ) -> Result<Self> {
        let bad = |m: String| Error::InvalidFunctor(m);
        if object_map.len() != source.num_objects() || morphism_map.len() != source.num_morphisms() {
            return Err(bad("map sizes do not match the source".into()));
        }
        if object_map.iter().any(|&x| x >= target.num_objects()) || morphism_map.iter().any(|&g| g >= target.num_morphisms()) {
            return Err(bad("image out of range".into()));
        }
        for g in 0..source.num_morphisms() {
            let fg = morphism_map[g];
            if target.src(fg) != object_map[source.src(g)] || target.dst(fg) != object_map[source.dst(g)] {
                return Err(bad(format!("morphism {g} is not sent between the images of its endpoints")));
            }
        }
        for x in 0..source.num_objects() {
            if morphism_map[source.id(x)] != target.id(object_map[x]) {
                return Err(bad(format!("identity at {x} not preserved")));
            }
        }
        for m1 in 0..source.num_morphisms() {
            for &m2 in source.out_morphisms(source.dst(m1)) {
                let lhs = morphism_map[source.compose_unchecked(m2, m1)];
                let rhs = target.compose_unchecked(morphism_map[m2], morphism_map[m1]);
                if lhs != rhs {
                    return Err(bad(format!("composition of ({m2}, {m1}) not preserved")));
                }
            }
        }
        Ok(Self { source, target, object_map, morphism_map })
    }

    pub fn identity(g: &Arc<Groupoid>) -> Self {
        Self {
            source: g.clone(),
            target: g.clone(),
            object_map: (0..g.num_objects()).collect(),
            morphism_map: (0..g.num_morphisms()).collect(),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupoidFunctor) -> Result<Self> {
        if !same_groupoid(&self.target, &next.source) {
            return Err(Error::InvalidFunctor("functors are not composable".into()));
        }
        Ok(Self {
            source: self.source.clone(),
            target: next.target.clone(),
            object_map: self.object_map.iter().map(|&x| next.object_map[x]).collect(),
            morphism_map: self.morphism_map.iter().map(|&g| next.morphism_map[g]).collect(),
        })
    }

    pub fn source(&self) -> &Arc<Groupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Groupoid> {
        &self.target
    }

    #[inline]
    pub fn object(&self, x: usize) -> usize {
        self.object_map[x]
    }

    #[inline]
    pub fn morphism(&self, g: usize) -> usize {
        self.morphism_map[g]
    }

    pub fn morphism_map(&self) -> &[usize] {
        &self.morphism_map
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    /// Exact equality of object and morphism maps over equal endpoints.
    pub fn agrees_with(&self, other: &GroupoidFunctor) -> bool {
        same_groupoid(&self.source, &other.source)
            && same_groupoid(&self.target, &other.target)
            && self.object_map == other.object_map
            && self.morphism_map == other.morphism_map
    }
}

/// A natural transformation `T: F ⇒ F'`.
#[derive(Debug, Clone)]
pub struct NaturalTransformation {
    from: GroupoidFunctor,
    to: GroupoidFunctor,
    components: Vec<usize>,
}

impl NaturalTransformation {
    /// Checks `F'(g) ∘ T(x₁) = T(x₂) ∘ F(g)` for every `g: x₁ → x₂`.
    pub fn new(from: GroupoidFunctor, to: GroupoidFunctor, components: Vec<usize>) -> Result<Self> {
        let bad = |m: String| Error::InvalidTransformation(m);
        if !same_groupoid(&from.source, &to.source) || !same_groupoid(&from.target, &to.target) {
            return Err(bad("functors have different endpoints".into()));
        }
        let (s, t) = (&from.source, &from.target);
        if components.len() != s.num_objects() {
            return Err(bad("one component per source object is required".into()));
        }
        for x in 0..s.num_objects() {
            let c = components[x];
            if c >= t.num_morphisms() || t.src(c) != from.object(x) || t.dst(c) != to.object(x) {
                return Err(bad(format!("component at {x} has the wrong endpoints")));
            }
        }
        for g in 0..s.num_morphisms() {
            let lhs = t.compose_unchecked(to.morphism(g), components[s.src(g)]);
            let rhs = t.compose_unchecked(components[s.dst(g)], from.morphism(g));
            if lhs != rhs {
                return Err(bad(format!("naturality square fails at morphism {g}")));
            }
        }
        Ok(Self { from, to, components })
    }

    pub fn from(&self) -> &GroupoidFunctor {
        &self.from
    }

    pub fn to(&self) -> &GroupoidFunctor {
        &self.to
    }

    #[inline]
    pub fn component(&self, x: usize) -> usize {
        self.components[x]
    }
}

pub(crate) fn same_groupoid(a: &Arc<Groupoid>, b: &Arc<Groupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Choices for the equivalence of a groupoid with its automorphism groups:
/// one basepoint per component and a morphism `f_y: y → x` for every object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetractionData {
    /// Basepoint of each component, in [`Groupoid::components`] order.
    pub basepoints: Vec<usize>,
    /// `f_y` for every object `y`.
    pub arrows: Vec<usize>,
}

impl RetractionData {
    /// Minimal object per component; `f_y` inverts the first path found by
    /// breadth-first search from the basepoint.
    pub fn default_for(g: &Groupoid) -> Self {
        let comps = g.components();
        let mut arrows = vec![usize::MAX; g.num_objects()];
        let basepoints: Vec<usize> = comps.iter().map(|c| c[0]).collect();
        for &x in &basepoints {
            let mut path = vec![usize::MAX; g.num_objects()];
            path[x] = g.id(x);
            let mut queue = VecDeque::from([x]);
            while let Some(z) = queue.pop_front() {
                for &h in g.out_morphisms(z) {
                    let y = g.dst(h);
                    if path[y] == usize::MAX {
                        path[y] = g.compose_unchecked(h, path[z]);
                        queue.push_back(y);
                    }
                }
            }
            for y in 0..g.num_objects() {
                if path[y] != usize::MAX {
                    arrows[y] = g.inv(path[y]);
                }
            }
        }
        Self { basepoints, arrows }
    }

    /// [`Self::default_for`], except that the component of `x` uses `x` as
    /// its basepoint with the first morphism `y → x` as each arrow.
    pub fn with_basepoint(g: &Groupoid, x: usize) -> Self {
        let mut data = Self::default_for(g);
        let comp = g.component_index();
        data.basepoints[comp[x]] = x;
        for y in (0..g.num_objects()).filter(|&y| comp[y] == comp[x]) {
            data.arrows[y] = if y == x { g.id(x) } else { g.hom(y, x).next().expect("connected") };
        }
        data
    }

    /// Uniformly random basepoints and arrows.
    pub fn random(g: &Groupoid, rng: &mut impl Rng) -> Self {
        let comps = g.components();
        let mut arrows = vec![usize::MAX; g.num_objects()];
        let mut basepoints = Vec::with_capacity(comps.len());
        for c in &comps {
            let x = c[rng.random_range(0..c.len())];
            basepoints.push(x);
            for &y in c {
                arrows[y] = if y == x {
                    g.id(x)
                } else {
                    let options: Vec<usize> = g.hom(y, x).collect();
                    options[rng.random_range(0..options.len())]
                };
            }
        }
        Self { basepoints, arrows }
    }

    pub fn validate(&self, g: &Groupoid) -> Result<()> {
        let bad = |m: String| Error::InvalidRetraction(m);
        let comps = g.components();
        if self.basepoints.len() != comps.len() || self.arrows.len() != g.num_objects() {
            return Err(bad("need one basepoint per component and one arrow per object".into()));
        }
        for (c, members) in comps.iter().enumerate() {
            let x = self.basepoints[c];
            if members.binary_search(&x).is_err() {
                return Err(bad(format!("basepoint {x} is not in component {c}")));
            }
            for &y in members {
                let f = self.arrows[y];
                if f >= g.num_morphisms() || g.src(f) != y || g.dst(f) != x {
                    return Err(bad(format!("arrow for object {y} is not a morphism {y} → {x}")));
                }
            }
            if self.arrows[x] != g.id(x) {
                return Err(bad(format!("arrow at basepoint {x} is not the identity")));
            }
        }
        Ok(())
    }
}

/// The equivalence between a groupoid and the disjoint union of the
/// automorphism groups at its basepoints.
#[derive(Debug, Clone)]
pub struct Retraction {
    /// `∐ Aut(x)` over basepoints; object `c` is component `c`.
    pub union: Arc<Groupoid>,
    /// `r(g) = f_z ∘ g ∘ f_y⁻¹`.
    pub r: GroupoidFunctor,
    /// The inclusion.
    pub i: GroupoidFunctor,
    /// `T: Id ⇒ i∘r` with `T(y) = f_y`.
    pub t: NaturalTransformation,
    /// Morphism ids of the union, listed per component (identity first).
    pub union_morphisms: Vec<Vec<usize>>,
}

/// Builds the retraction functors and checks `r∘i = Id` exactly.
pub fn retraction(g: &Arc<Groupoid>, data: &RetractionData) -> Result<Retraction> {
    data.validate(g)?;
    let comp = g.component_index();
    let mut ends = Vec::new();
    let mut i_morph = Vec::new();
    let mut union_id = vec![usize::MAX; g.num_morphisms()];
    let mut union_morphisms = Vec::new();
    for (c, &x) in data.basepoints.iter().enumerate() {
        let mut ids = Vec::new();
        for a in g.automorphisms(x) {
            union_id[a] = i_morph.len();
            ids.push(i_morph.len());
            i_morph.push(a);
            ends.push((c, c));
        }
        union_morphisms.push(ids);
    }
    let union = Arc::new(Groupoid::from_fn(data.basepoints.len(), ends, |m2, m1| {
        union_id[g.compose_unchecked(i_morph[m2], i_morph[m1])]
    })?);
    let i = GroupoidFunctor::new(union.clone(), g.clone(), data.basepoints.clone(), i_morph.clone())?;
    let r_morph = (0..g.num_morphisms())
        .map(|h| {
            let (y, z) = (g.src(h), g.dst(h));
            let core = g.compose_unchecked(g.compose_unchecked(data.arrows[z], h), g.inv(data.arrows[y]));
            union_id[core]
        })
        .collect();
    let r = GroupoidFunctor::new(g.clone(), union.clone(), comp, r_morph)?;
    let ri = i.then(&r)?;
    if !ri.agrees_with(&GroupoidFunctor::identity(&union)) {
        return Err(Error::CrossCheck("r∘i is not the identity".into()));
    }
    let ir = r.then(&i)?;
    let t = NaturalTransformation::new(GroupoidFunctor::identity(g), ir, data.arrows.clone())?;
    Ok(Retraction { union, r, i, t, union_morphisms })
}

/// The loop (inertia) groupoid `Λ𝒢` with its labeling by `(g, γ)`.
#[derive(Debug, Clone)]
pub struct LoopGroupoid {
    base: Arc<Groupoid>,
    groupoid: Arc<Groupoid>,
    object_loop: Vec<usize>,
    loop_object: Vec<Option<usize>>,
    labels: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl LoopGroupoid {
    /// Objects are the loops of `base` in ascending morphism order; the
    /// morphisms leaving loop `γ` at `x` are `(g, γ): γ → gγg⁻¹`, one for
    /// each `g` leaving `x`, in out-list order.
    pub fn new(base: Arc<Groupoid>) -> Self {
        let object_loop = base.loops();
        let mut loop_object = vec![None; base.num_morphisms()];
        for (o, &l) in object_loop.iter().enumerate() {
            loop_object[l] = Some(o);
        }
        let mut labels = Vec::new();
        let mut offsets = Vec::with_capacity(object_loop.len());
        let mut ends = Vec::new();
        for (o, &gamma) in object_loop.iter().enumerate() {
            offsets.push(labels.len());
            for &g in base.out_morphisms(base.src(gamma)) {
                let target = loop_object[base.conjugate(g, gamma)].expect("conjugate of a loop is a loop");
                labels.push((g, o));
                ends.push((o, target));
            }
        }
        let groupoid = Groupoid::from_fn(object_loop.len(), ends, |m2, m1| {
            let (g, o) = labels[m1];
            let (h, _) = labels[m2];
            offsets[o] + base.out_position(base.compose_unchecked(h, g))
        })
        .expect("loop groupoid of a groupoid is a groupoid");
        Self { base, groupoid: Arc::new(groupoid), object_loop, loop_object, labels, offsets }
    }

    pub fn base(&self) -> &Arc<Groupoid> {
        &self.base
    }

    pub fn groupoid(&self) -> &Arc<Groupoid> {
        &self.groupoid
    }

    /// The loop of the base represented by a loop-groupoid object.
    #[inline]
    pub fn object_loop(&self, object: usize) -> usize {
        self.object_loop[object]
    }

    /// The loop-groupoid object of a base loop.
    #[inline]
    pub fn loop_object(&self, gamma: usize) -> Option<usize> {
        self.loop_object[gamma]
    }

    /// `(g, source object)` underlying a loop-groupoid morphism.
    #[inline]
    pub fn label(&self, morphism: usize) -> (usize, usize) {
        self.labels[morphism]
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    /// The morphism `(g, γ)` leaving `object`, if `g` starts where the loop lives.
    pub fn morphism_for(&self, g: usize, object: usize) -> Option<usize> {
        let gamma = self.object_loop[object];
        (self.base.src(g) == self.base.src(gamma)).then(|| self.offsets[object] + self.base.out_position(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3).unwrap()
    }

    #[test]
    fn delooping_counts() {
        let z2 = Groupoid::delooping(&FiniteGroup::cyclic(2));
        assert_eq!((z2.num_objects(), z2.num_morphisms()), (1, 2));
        let g = Groupoid::delooping(&s3());
        assert_eq!((g.num_objects(), g.num_morphisms()), (1, 6));
        let t = Groupoid::delooping(&FiniteGroup::trivial());
        assert_eq!((t.num_objects(), t.num_morphisms()), (1, 1));
        assert!(t.is_identity(0));
    }

    #[test]
    fn trivial_action_is_delooping() {
        let g = s3();
        let a = Groupoid::action(&g, 1, |_, x| x).unwrap();
        assert_eq!(a, Groupoid::delooping(&g));
    }

    #[test]
    fn conjugation_action_of_s3() {
        let a = Groupoid::conjugation(&s3());
        assert_eq!((a.num_objects(), a.num_morphisms()), (6, 36));
    }

    #[test]
    fn left_translation_is_connected_with_trivial_automorphisms() {
        let g = FiniteGroup::dihedral(4).unwrap();
        let a = Groupoid::left_translation(&g);
        assert_eq!(a.components().len(), 1);
        for x in 0..a.num_objects() {
            assert_eq!(a.automorphism_group(x).0.order(), 1);
        }
    }

    #[test]
    fn invalid_action_is_rejected() {
        let g = FiniteGroup::cyclic(3);
        // Not compatible with the group law.
        let err = Groupoid::action(&g, 2, |h, x| if h == 1 { 1 - x } else { x }).unwrap_err();
        assert!(matches!(err, Error::InvalidAction(_)));
    }

    #[test]
    fn loop_groupoid_of_s3() {
        let lg = LoopGroupoid::new(Arc::new(Groupoid::delooping(&s3())));
        let l = lg.groupoid();
        assert_eq!((l.num_objects(), l.num_morphisms()), (6, 36));
        let comps = l.components();
        assert_eq!(comps.len(), 3);
        let mut orders: Vec<usize> = comps.iter().map(|c| l.automorphism_group(c[0]).0.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 3, 6]);
        // Components are exactly the conjugacy classes.
        assert_eq!(comps, s3().conjugacy_classes());
    }

    #[test]
    fn loop_groupoid_matches_conjugation_action() {
        for g in [s3(), FiniteGroup::dihedral(4).unwrap(), FiniteGroup::cyclic(5)] {
            let lg = LoopGroupoid::new(Arc::new(Groupoid::delooping(&g)));
            assert_eq!(**lg.groupoid(), Groupoid::conjugation(&g));
            for m in 0..lg.groupoid().num_morphisms() {
                let (h, x) = lg.label(m);
                assert_eq!(m, x * g.order() + h);
            }
            for x in 0..g.order() {
                let c = g.centralizer(g.element(x).unwrap());
                assert_eq!(lg.groupoid().automorphism_group(x).0.order(), c.group.order());
            }
        }
    }

    #[test]
    fn iterated_loop_groupoids_count_commuting_tuples() {
        let g = s3();
        let l1 = LoopGroupoid::new(Arc::new(Groupoid::delooping(&g)));
        let l2 = LoopGroupoid::new(l1.groupoid().clone());
        let l3 = LoopGroupoid::new(l2.groupoid().clone());
        assert_eq!(l2.groupoid().num_objects(), g.commuting_tuples(2).unwrap().len());
        assert_eq!(l3.groupoid().num_objects(), g.commuting_tuples(3).unwrap().len());
        let z4 = FiniteGroup::cyclic(4);
        let m2 = LoopGroupoid::new(LoopGroupoid::new(Arc::new(Groupoid::delooping(&z4))).groupoid().clone());
        assert_eq!(m2.groupoid().num_objects(), 16);
        let t = LoopGroupoid::new(Arc::new(Groupoid::delooping(&FiniteGroup::trivial())));
        assert_eq!((t.groupoid().num_objects(), t.groupoid().num_morphisms()), (1, 1));
    }

    #[test]
    fn components_of_union() {
        let a = Groupoid::delooping(&FiniteGroup::cyclic(2));
        let b = Groupoid::delooping(&s3());
        let u = Groupoid::disjoint_union(&a, &b);
        assert_eq!(u.components(), vec![vec![0], vec![1]]);
        assert_eq!(Groupoid::delooping(&s3()).components().len(), 1);
    }

    #[test]
    fn automorphism_group_of_delooping_is_the_group() {
        let g = s3();
        let (aut, labels) = Groupoid::delooping(&g).automorphism_group(0);
        assert_eq!(aut.table(), g.table());
        assert_eq!(labels, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn retraction_of_one_object_groupoid_is_identity() {
        let g = Arc::new(Groupoid::delooping(&s3()));
        let data = RetractionData::default_for(&g);
        let ret = retraction(&g, &data).unwrap();
        assert_eq!(ret.r.morphism_map(), (0..6).collect::<Vec<_>>().as_slice());
        assert_eq!(ret.i.morphism_map(), (0..6).collect::<Vec<_>>().as_slice());
        assert!((0..1).all(|x| g.is_identity(ret.t.component(x))));
    }

    #[test]
    fn retraction_of_loop_groupoid_random_choices() {
        let lg = LoopGroupoid::new(Arc::new(Groupoid::delooping(&s3())));
        let g = lg.groupoid().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let data = RetractionData::random(&g, &mut rng);
            let ret = retraction(&g, &data).unwrap();
            assert!(ret.i.then(&ret.r).unwrap().agrees_with(&GroupoidFunctor::identity(&ret.union)));
            assert_eq!(ret.union.num_morphisms(), 6 + 2 + 3);
        }
    }

    #[test]
    fn retraction_of_translation_groupoid() {
        let g = Arc::new(Groupoid::left_translation(&FiniteGroup::cyclic(2)));
        let ret = retraction(&g, &RetractionData::default_for(&g)).unwrap();
        assert_eq!((ret.union.num_objects(), ret.union.num_morphisms()), (1, 1));
    }

    #[test]
    fn rebased_retraction_data() {
        let g = Arc::new(Groupoid::conjugation(&s3()));
        for x in 0..6 {
            let data = RetractionData::with_basepoint(&g, x);
            data.validate(&g).unwrap();
            assert!(data.basepoints.contains(&x));
        }
    }

    #[test]
    fn malformed_retraction_data() {
        let g = Arc::new(Groupoid::conjugation(&s3()));
        let mut data = RetractionData::default_for(&g);
        data.arrows[data.basepoints[1]] = g.out_morphisms(data.basepoints[1])[1];
        assert!(matches!(retraction(&g, &data), Err(Error::InvalidRetraction(_))));
        let mut data = RetractionData::default_for(&g);
        data.basepoints.pop();
        assert!(retraction(&g, &data).is_err());
    }

    #[test]
    fn functor_validation_rejects_broken_maps() {
        let z2 = Arc::new(Groupoid::delooping(&FiniteGroup::cyclic(2)));
        let z4 = Arc::new(Groupoid::delooping(&FiniteGroup::cyclic(4)));
        // Z2 → Z4, 1 ↦ 2 is a homomorphism; 1 ↦ 1 is not.
        assert!(GroupoidFunctor::new(z2.clone(), z4.clone(), vec![0], vec![0, 2]).is_ok());
        assert!(GroupoidFunctor::new(z2.clone(), z4.clone(), vec![0], vec![0, 1]).is_err());
        assert!(GroupoidFunctor::new(z2.clone(), z4, vec![0], vec![1, 2]).is_err());
    }

    #[test]
    fn compose_table_roundtrip() {
        let g = Groupoid::conjugation(&s3());
        let m = g.num_morphisms();
        let ends: Vec<(usize, usize)> = (0..m).map(|h| (g.src(h), g.dst(h))).collect();
        let table: Vec<Vec<i64>> = (0..m)
            .map(|m2| (0..m).map(|m1| g.compose(m2, m1).map_or(-1, |v| v as i64)).collect())
            .collect();
        assert_eq!(Groupoid::from_compose_table(g.num_objects(), ends.clone(), &table).unwrap(), g);
        let mut broken = table.clone();
        let (a, b) = (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).find(|&(x, y)| broken[x][y] < 0).unwrap();
        broken[a][b] = 0;
        assert!(Groupoid::from_compose_table(g.num_objects(), ends, &broken).is_err());
    }

    #[test]
    fn simplex_enumeration_counts() {
        let g = Groupoid::conjugation(&s3());
        let mut count = 0;
        g.for_each_simplex(2, |s| {
            assert!(g.is_composable(s));
            count += 1;
        });
        assert_eq!(count, 36 * 6);
        let mut slots = std::collections::HashSet::new();
        g.for_each_simplex(3, |s| assert!(slots.insert(g.simplex_slot(s))));
        assert_eq!(slots.len(), 36 * 36);
        assert!(slots.iter().all(|&s| s < g.simplex_slots(3)));
    }
}
