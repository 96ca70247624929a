//! Finite sphere posets, strict diagrams of complexes over them, and the
//! homotopy (co)limit machinery used to verify the sphere adjunction.
//!
//! Homotopy colimits and limits are computed as total complexes of the
//! (co)simplicial replacement over nondegenerate chains of the poset. The
//! cofibrant/fibrant replacements are the one-sided bar models whose
//! transition maps are split inclusions/projections; they make the unit and
//! counit strictly natural chain maps, which is what lets every verdict be
//! phrased in terms of genuine `ChainMap`s.

use crate::complex::{cone, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub const DEFAULT_SPHERE_BOUND: usize = 4;

/// A finite poset with labeled elements. Elements are addressed by index;
/// `leq` is checked for reflexivity, antisymmetry and transitivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<u32>,
    leq: Vec<bool>,
}

impl FinitePoset {
    pub fn new(labels: Vec<u32>, leq: Vec<bool>) -> Result<Self> {
        let n = labels.len();
        if leq.len() != n * n {
            return Err(Error::InvalidPoset("relation size must be n^2".into()));
        }
        let mut seen = BTreeSet::new();
        if !labels.iter().all(|l| seen.insert(*l)) {
            return Err(Error::InvalidPoset("labels must be distinct".into()));
        }
        let p = FinitePoset { labels, leq };
        for x in 0..n {
            if !p.leq(x, x) {
                return Err(Error::InvalidPoset(format!("not reflexive at {x}")));
            }
            for y in 0..n {
                if x != y && p.leq(x, y) && p.leq(y, x) {
                    return Err(Error::InvalidPoset(format!("not antisymmetric at ({x},{y})")));
                }
                for z in 0..n {
                    if p.leq(x, y) && p.leq(y, z) && !p.leq(x, z) {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, idx: usize) -> u32 {
        self.labels[idx]
    }

    pub fn index_of_label(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// All ordered pairs x < y.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                if self.less(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Covering pairs: x < y with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(x, y)| !(0..self.len()).any(|z| self.less(x, z) && self.less(z, y)))
            .collect()
    }

    /// Nondegenerate chains graded by length (a length-k chain has k+1
    /// elements), each grade sorted lexicographically by label sequence.
    pub fn nondegenerate_chains(&self) -> Vec<Vec<Vec<usize>>> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.labels[i]);
        let mut by_len: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn extend(
            p: &FinitePoset,
            order: &[usize],
            stack: &mut Vec<usize>,
            by_len: &mut Vec<Vec<Vec<usize>>>,
        ) {
            let k = stack.len() - 1;
            if by_len.len() <= k {
                by_len.resize(k + 1, Vec::new());
            }
            by_len[k].push(stack.clone());
            let last = *stack.last().unwrap();
            for &next in order {
                if p.less(last, next) {
                    stack.push(next);
                    extend(p, order, stack, by_len);
                    stack.pop();
                }
            }
        }
        for &start in &order {
            stack.push(start);
            extend(self, &order, &mut stack, &mut by_len);
            stack.pop();
        }
        for grade in &mut by_len {
            grade.sort_by_key(|c| c.iter().map(|&i| self.labels[i]).collect::<Vec<_>>());
        }
        by_len
    }

    /// If this poset is some `sphere_poset(n)` up to relabeling-free equality,
    /// return `n`.
    pub fn sphere_dimension(&self) -> Option<usize> {
        let m = self.len();
        if m < 2 || !m.is_multiple_of(2) {
            return None;
        }
        let n = m / 2 - 1;
        let mut sorted = self.labels.clone();
        sorted.sort_unstable();
        if sorted != (1..=m as u32).collect::<Vec<_>>() {
            return None;
        }
        let level = |idx: usize| (self.labels[idx] as usize - 1) / 2;
        for x in 0..m {
            for y in 0..m {
                let expect = x == y || level(x) < level(y);
                if self.leq(x, y) != expect {
                    return None;
                }
            }
        }
        Some(n)
    }
}

/// The sphere poset P_n: 2n+2 elements labeled 1..2n+2, built by repeatedly
/// adjoining two incomparable cone points above everything so far. Elements
/// 2k+1, 2k+2 form level k; x < y iff level(x) < level(y).
pub fn sphere_poset(n: usize) -> Result<FinitePoset> {
    sphere_poset_bounded(n, DEFAULT_SPHERE_BOUND)
}

pub fn sphere_poset_bounded(n: usize, bound: usize) -> Result<FinitePoset> {
    if n > bound {
        return Err(Error::ResourceBound(format!(
            "sphere poset dimension {n} exceeds bound {bound}"
        )));
    }
    let m = 2 * n + 2;
    let labels: Vec<u32> = (1..=m as u32).collect();
    let level = |i: usize| i / 2;
    let mut leq = vec![false; m * m];
    for x in 0..m {
        for y in 0..m {
            leq[x * m + y] = x == y || level(x) < level(y);
        }
    }
    FinitePoset::new(labels, leq)
}

/// A strict functor from a finite poset to chain complexes: a stalk per
/// element and a transition chain map for every strict pair, composing
/// entry-exactly.
#[derive(Debug, Clone)]
pub struct PosetDiagram {
    poset: FinitePoset,
    stalks: Vec<ChainComplex>,
    transitions: BTreeMap<(usize, usize), ChainMap>,
}

impl PosetDiagram {
    pub fn new(
        poset: FinitePoset,
        stalks: Vec<ChainComplex>,
        transitions: BTreeMap<(usize, usize), ChainMap>,
    ) -> Result<Self> {
        if stalks.len() != poset.len() {
            return Err(Error::InvalidDiagram("one stalk per element required".into()));
        }
        for (&(x, y), t) in &transitions {
            if !poset.less(x, y) {
                return Err(Error::InvalidDiagram(format!("transition on non-pair ({x},{y})")));
            }
            if t.source().dims() != stalks[x].dims() || t.target().dims() != stalks[y].dims() {
                return Err(Error::InvalidDiagram(format!(
                    "transition ({x},{y}) endpoints do not match stalks"
                )));
            }
        }
        let d = PosetDiagram { poset, stalks, transitions };
        for (x, y) in d.poset.strict_pairs() {
            let direct = d.transition(x, y);
            for z in 0..d.poset.len() {
                if d.poset.less(x, z) && d.poset.less(z, y) {
                    let composed = d.transition(z, y).compose(&d.transition(x, z))?;
                    for &i in direct.source().support() .iter(){
                        if composed.component(i) != direct.component(i) {
                            return Err(Error::InvalidDiagram(format!(
                                "functoriality fails on {x} <= {z} <= {y} at degree {i}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(d)
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn stalk(&self, x: usize) -> &ChainComplex {
        &self.stalks[x]
    }

    /// Transition along x <= y; identity when x = y.
    pub fn transition(&self, x: usize, y: usize) -> ChainMap {
        if x == y {
            return ChainMap::identity(&self.stalks[x]);
        }
        self.transitions
            .get(&(x, y))
            .cloned()
            .unwrap_or_else(|| ChainMap::zero(&self.stalks[x], &self.stalks[y]))
    }

    /// The pullback g* of a complex: every stalk `c`, every transition the
    /// identity.
    pub fn constant(poset: &FinitePoset, c: &ChainComplex) -> Self {
        let stalks = vec![c.clone(); poset.len()];
        let transitions = poset
            .strict_pairs()
            .into_iter()
            .map(|(x, y)| ((x, y), ChainMap::identity(c)))
            .collect();
        PosetDiagram { poset: poset.clone(), stalks, transitions }
    }

    pub fn shift(&self, n: i64) -> PosetDiagram {
        PosetDiagram {
            poset: self.poset.clone(),
            stalks: self.stalks.iter().map(|c| c.shift(n)).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|(&k, t)| (k, t.shift(n)))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &PosetDiagram) -> Result<PosetDiagram> {
        if self.poset != other.poset {
            return Err(Error::InvalidDiagram("direct_sum: different posets".into()));
        }
        let stalks: Vec<ChainComplex> = self
            .stalks
            .iter()
            .zip(&other.stalks)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<Result<_>>()?;
        let mut transitions = BTreeMap::new();
        for (x, y) in self.poset.strict_pairs() {
            let (s, t) = (self.transition(x, y), other.transition(x, y));
            let mut maps = BTreeMap::new();
            let degrees: BTreeSet<i64> = stalks[x].support().into_iter().chain(stalks[y].support()).collect();
            for &i in &degrees {
                let mut m = Matrix::zero(stalks[x].field(), stalks[y].dim(i), stalks[x].dim(i));
                m.set_block(0, 0, &s.component(i));
                m.set_block(self.stalks[y].dim(i), self.stalks[x].dim(i), &t.component(i));
                maps.insert(i, m);
            }
            transitions.insert((x, y), ChainMap::new(stalks[x].clone(), stalks[y].clone(), maps)?);
        }
        PosetDiagram::new(self.poset.clone(), stalks, transitions)
    }
}

/// A strictly natural transformation of diagrams over a shared poset.
#[derive(Debug, Clone)]
pub struct DiagramMap {
    source: PosetDiagram,
    target: PosetDiagram,
    components: Vec<ChainMap>,
}

impl DiagramMap {
    pub fn new(source: PosetDiagram, target: PosetDiagram, components: Vec<ChainMap>) -> Result<Self> {
        if source.poset != target.poset {
            return Err(Error::InvalidDiagram("diagram map across different posets".into()));
        }
        if components.len() != source.poset.len() {
            return Err(Error::InvalidDiagram("one component per element required".into()));
        }
        for (x, c) in components.iter().enumerate() {
            if c.source().dims() != source.stalk(x).dims()
                || c.target().dims() != target.stalk(x).dims()
            {
                return Err(Error::InvalidDiagram(format!("component {x} endpoint mismatch")));
            }
        }
        for (x, y) in source.poset.strict_pairs() {
            let via_target = target.transition(x, y).compose(&components[x])?;
            let via_source = components[y].compose(&source.transition(x, y))?;
            let degrees: BTreeSet<i64> = source
                .stalk(x)
                .support()
                .into_iter()
                .chain(target.stalk(y).support())
                .collect();
            for &i in &degrees {
                if via_target.component(i) != via_source.component(i) {
                    return Err(Error::InvalidDiagram(format!(
                        "not natural on {x} < {y} at degree {i}"
                    )));
                }
            }
        }
        Ok(DiagramMap { source, target, components })
    }

    pub fn source(&self) -> &PosetDiagram {
        &self.source
    }

    pub fn target(&self) -> &PosetDiagram {
        &self.target
    }

    pub fn component(&self, x: usize) -> &ChainMap {
        &self.components[x]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BarFlavor {
    /// Simplicial replacement: chains contribute F(min) in degree internal + k.
    Colim,
    /// Cosimplicial replacement: chains contribute F(max) in degree internal - k.
    Lim,
}

/// Total complex of a bar replacement over a subset of the nondegenerate
/// chains, with enough index data to build structure maps.
#[derive(Debug, Clone)]
struct BarTotal {
    flavor: BarFlavor,
    /// (length, chain), ordered by length then label-lexicographically.
    chains: Vec<(usize, Vec<usize>)>,
    index: HashMap<Vec<usize>, usize>,
    /// per chain, the contributing stalk (F(min) or F(max))
    stalks: Vec<ChainComplex>,
    /// per total degree, block offsets parallel to `chains`
    offsets: BTreeMap<i64, Vec<usize>>,
    complex: ChainComplex,
}

impl BarTotal {
    fn shift_of(&self, k: usize) -> i64 {
        match self.flavor {
            BarFlavor::Colim => k as i64,
            BarFlavor::Lim => -(k as i64),
        }
    }

    /// Internal degree of a block at total degree `m`.
    fn internal(&self, pos: usize, m: i64) -> i64 {
        m - self.shift_of(self.chains[pos].0)
    }

    fn block_dim(&self, pos: usize, m: i64) -> usize {
        self.stalks[pos].dim(self.internal(pos, m))
    }

    fn offset(&self, pos: usize, m: i64) -> usize {
        self.offsets[&m][pos]
    }
}

fn sign(field: crate::linalg::PrimeField, n: i64) -> u64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        field.neg(1)
    }
}

fn bar_total(
    f: &PosetDiagram,
    flavor: BarFlavor,
    keep: impl Fn(&[usize]) -> bool,
) -> Result<BarTotal> {
    let field = f
        .stalks
        .first()
        .map(|c| c.field())
        .unwrap_or(crate::linalg::PrimeField::new(2).unwrap());
    let mut chains: Vec<(usize, Vec<usize>)> = Vec::new();
    for (k, grade) in f.poset().nondegenerate_chains().into_iter().enumerate() {
        for c in grade {
            if keep(&c) {
                chains.push((k, c));
            }
        }
    }
    let index: HashMap<Vec<usize>, usize> =
        chains.iter().enumerate().map(|(i, (_, c))| (c.clone(), i)).collect();
    let stalks: Vec<ChainComplex> = chains
        .iter()
        .map(|(_, c)| match flavor {
            BarFlavor::Colim => f.stalk(c[0]).clone(),
            BarFlavor::Lim => f.stalk(*c.last().unwrap()).clone(),
        })
        .collect();

    let mut proto = BarTotal {
        flavor,
        chains,
        index,
        stalks,
        offsets: BTreeMap::new(),
        complex: ChainComplex::zero(field),
    };

    // degree range of the total complex
    let mut degrees: BTreeSet<i64> = BTreeSet::new();
    for pos in 0..proto.chains.len() {
        let shift = proto.shift_of(proto.chains[pos].0);
        for &q in proto.stalks[pos].support().iter() {
            degrees.insert(q + shift);
        }
    }
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for &m in &degrees {
        let mut off = Vec::with_capacity(proto.chains.len());
        let mut total = 0;
        for pos in 0..proto.chains.len() {
            off.push(total);
            total += proto.block_dim(pos, m);
        }
        proto.offsets.insert(m, off);
        if total > 0 {
            dims.insert(m, total);
        }
    }
    // make offsets available for all adjacent degrees too
    let all_degrees: BTreeSet<i64> = degrees.iter().flat_map(|&m| [m - 1, m, m + 1]).collect();
    for &m in &all_degrees {
        if proto.offsets.contains_key(&m) {
            continue;
        }
        let mut off = Vec::with_capacity(proto.chains.len());
        let mut total = 0;
        for pos in 0..proto.chains.len() {
            off.push(total);
            total += proto.block_dim(pos, m);
        }
        proto.offsets.insert(m, off);
    }

    let mut diff: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (&m, &cols) in &dims {
        let rows = dims.get(&(m - 1)).copied().unwrap_or(0);
        if rows == 0 {
            continue;
        }
        let mut d = Matrix::zero(field, rows, cols);
        for pos in 0..proto.chains.len() {
            let (k, chain) = proto.chains[pos].clone();
            let q = proto.internal(pos, m);
            let cdim = proto.stalks[pos].dim(q);
            if cdim == 0 {
                continue;
            }
            let coff = proto.offset(pos, m);
            // internal differential, sign (-1)^k on length-k blocks
            let internal = proto.stalks[pos].differential(q).scale(sign(field, k as i64));
            if internal.rows() > 0 {
                d.set_block(proto.offset(pos, m - 1), coff, &internal);
            }
            match flavor {
                BarFlavor::Colim => {
                    // simplicial faces sigma -> d_i(sigma)
                    if k >= 1 {
                        for i in 0..=k {
                            let mut face = chain.clone();
                            face.remove(i);
                            let Some(&fpos) = proto.index.get(&face) else { continue };
                            let map = if i == 0 {
                                f.transition(chain[0], chain[1]).component(q)
                            } else {
                                Matrix::identity(field, cdim)
                            };
                            let block = map.scale(sign(field, i as i64));
                            if block.rows() > 0 && !block.is_zero() {
                                d.set_block(proto.offset(fpos, m - 1), coff, &block);
                            }
                        }
                    }
                }
                BarFlavor::Lim => {
                    // cofaces: longer chains tau with sigma = d_i(tau) appear in
                    // degree m - 1; handled from the row side below.
                }
            }
        }
        if flavor == BarFlavor::Lim {
            for tpos in 0..proto.chains.len() {
                let (tk, tau) = proto.chains[tpos].clone();
                if tk == 0 {
                    continue;
                }
                let qt = proto.internal(tpos, m - 1);
                if proto.stalks[tpos].dim(qt) == 0 {
                    continue;
                }
                for i in 0..=tk {
                    let mut sigma = tau.clone();
                    sigma.remove(i);
                    let Some(&spos) = proto.index.get(&sigma) else { continue };
                    // same internal degree on both sides
                    if proto.internal(spos, m) != qt {
                        continue;
                    }
                    let map = if i == tk {
                        f.transition(tau[tk - 1], tau[tk]).component(qt)
                    } else {
                        Matrix::identity(field, proto.stalks[tpos].dim(qt))
                    };
                    let block = map.scale(sign(field, i as i64));
                    if block.rows() > 0 && !block.is_zero() {
                        d.set_block(proto.offset(tpos, m - 1), proto.offset(spos, m), &block);
                    }
                }
            }
        }
        diff.insert(m, d);
    }
    proto.complex = ChainComplex::new(field, dims, diff)?;
    Ok(proto)
}

/// Homotopy colimit: total complex of the simplicial replacement; realizes
/// the left adjoint of the pullback functor.
pub fn hocolim(f: &PosetDiagram) -> Result<ChainComplex> {
    Ok(bar_total(f, BarFlavor::Colim, |_| true)?.complex)
}

/// Homotopy limit: total complex of the cosimplicial replacement; realizes
/// the right adjoint of the pullback functor.
pub fn holim(f: &PosetDiagram) -> Result<ChainComplex> {
    Ok(bar_total(f, BarFlavor::Lim, |_| true)?.complex)
}

fn bar_map(src: &BarTotal, tgt: &BarTotal, phi: &DiagramMap, by_min: bool) -> Result<ChainMap> {
    debug_assert_eq!(src.chains.len(), tgt.chains.len());
    let field = src.complex.field();
    let degrees: BTreeSet<i64> = src
        .complex
        .support()
        .into_iter()
        .chain(tgt.complex.support())
        .collect();
    let mut maps = BTreeMap::new();
    for &m in &degrees {
        let mut mat = Matrix::zero(field, tgt.complex.dim(m), src.complex.dim(m));
        for pos in 0..src.chains.len() {
            let chain = &src.chains[pos].1;
            let x = if by_min { chain[0] } else { *chain.last().unwrap() };
            let q = src.internal(pos, m);
            let block = phi.component(x).component(q);
            if block.rows() > 0 && block.cols() > 0 {
                mat.set_block(tgt.offset(pos, m), src.offset(pos, m), &block);
            }
        }
        maps.insert(m, mat);
    }
    ChainMap::new(src.complex.clone(), tgt.complex.clone(), maps)
}

/// The chain map `hocolim(phi.source) -> hocolim(phi.target)` induced by a
/// strict diagram map, blockwise at the minimum of each chain.
pub fn hocolim_map(phi: &DiagramMap) -> Result<ChainMap> {
    let src = bar_total(phi.source(), BarFlavor::Colim, |_| true)?;
    let tgt = bar_total(phi.target(), BarFlavor::Colim, |_| true)?;
    bar_map(&src, &tgt, phi, true)
}

/// The chain map `holim(phi.source) -> holim(phi.target)`, blockwise at the
/// maximum of each chain.
pub fn holim_map(phi: &DiagramMap) -> Result<ChainMap> {
    let src = bar_total(phi.source(), BarFlavor::Lim, |_| true)?;
    let tgt = bar_total(phi.target(), BarFlavor::Lim, |_| true)?;
    bar_map(&src, &tgt, phi, false)
}

/// Unit of `g* ⊣ g_*`: the diagonal of `v` into the length-0 cochain blocks
/// of `holim(constant v)`.
pub fn unit_map(v: &ChainComplex, poset: &FinitePoset) -> Result<ChainMap> {
    let diagram = PosetDiagram::constant(poset, v);
    let total = bar_total(&diagram, BarFlavor::Lim, |_| true)?;
    let field = v.field();
    let mut maps = BTreeMap::new();
    for &m in &total.complex.support() {
        let mut mat = Matrix::zero(field, total.complex.dim(m), v.dim(m));
        if v.dim(m) > 0 {
            for pos in 0..total.chains.len() {
                if total.chains[pos].0 == 0 {
                    mat.set_block(total.offset(pos, m), 0, &Matrix::identity(field, v.dim(m)));
                }
            }
        }
        maps.insert(m, mat);
    }
    ChainMap::new(v.clone(), total.complex.clone(), maps)
}

/// Counit of `g_! ⊣ g*`: the fold of the length-0 chain blocks of
/// `hocolim(constant v)` onto `v`, zero on higher blocks.
pub fn counit_map(poset: &FinitePoset, v: &ChainComplex) -> Result<ChainMap> {
    let diagram = PosetDiagram::constant(poset, v);
    let total = bar_total(&diagram, BarFlavor::Colim, |_| true)?;
    let field = v.field();
    let mut maps = BTreeMap::new();
    for &m in &total.complex.support() {
        let mut mat = Matrix::zero(field, v.dim(m), total.complex.dim(m));
        if v.dim(m) > 0 {
            for pos in 0..total.chains.len() {
                if total.chains[pos].0 == 0 {
                    mat.set_block(0, total.offset(pos, m), &Matrix::identity(field, v.dim(m)));
                }
            }
        }
        maps.insert(m, mat);
    }
    ChainMap::new(total.complex.clone(), v.clone(), maps)
}

/// The twist of the sphere adjunction on an object: `cone(unit_map(v, P_n))`.
/// Its homology is that of `v` shifted by `-n`.
pub fn sphere_twist(v: &ChainComplex, n: usize) -> Result<ChainComplex> {
    let poset = sphere_poset(n)?;
    Ok(cone(&unit_map(v, &poset)?).complex)
}

/// A replacement diagram together with the chains contributing to each stalk.
#[derive(Debug, Clone)]
pub struct ReplacementDiagram {
    pub diagram: PosetDiagram,
    /// per element: (length, chain) pairs indexing the stalk blocks
    pub chains_per_element: Vec<Vec<(usize, Vec<usize>)>>,
}

fn bar_inclusion(small: &BarTotal, big: &BarTotal) -> Result<ChainMap> {
    let field = small.complex.field();
    let degrees: BTreeSet<i64> = small
        .complex
        .support()
        .into_iter()
        .chain(big.complex.support())
        .collect();
    let mut maps = BTreeMap::new();
    for &m in &degrees {
        let mut mat = Matrix::zero(field, big.complex.dim(m), small.complex.dim(m));
        for pos in 0..small.chains.len() {
            let dim = small.block_dim(pos, m);
            if dim == 0 {
                continue;
            }
            let bpos = big.index[&small.chains[pos].1];
            mat.set_block(big.offset(bpos, m), small.offset(pos, m), &Matrix::identity(field, dim));
        }
        maps.insert(m, mat);
    }
    ChainMap::new(small.complex.clone(), big.complex.clone(), maps)
}

fn bar_projection(big: &BarTotal, small: &BarTotal) -> Result<ChainMap> {
    let field = small.complex.field();
    let degrees: BTreeSet<i64> = small
        .complex
        .support()
        .into_iter()
        .chain(big.complex.support())
        .collect();
    let mut maps = BTreeMap::new();
    for &m in &degrees {
        let mut mat = Matrix::zero(field, small.complex.dim(m), big.complex.dim(m));
        for pos in 0..small.chains.len() {
            let dim = small.block_dim(pos, m);
            if dim == 0 {
                continue;
            }
            let bpos = big.index[&small.chains[pos].1];
            mat.set_block(small.offset(pos, m), big.offset(bpos, m), &Matrix::identity(field, dim));
        }
        maps.insert(m, mat);
    }
    ChainMap::new(big.complex.clone(), small.complex.clone(), maps)
}

/// Cofibrant replacement PF: the stalk at x is the simplicial total complex
/// over chains with maximum <= x; transitions are split inclusions. Returns
/// PF with its strictly natural pointwise-qis augmentation q: PF -> f.
pub fn cofibrant_replacement(f: &PosetDiagram) -> Result<(ReplacementDiagram, DiagramMap)> {
    let poset = f.poset().clone();
    let n = poset.len();
    let totals: Vec<BarTotal> = (0..n)
        .map(|x| bar_total(f, BarFlavor::Colim, |c| poset.leq(*c.last().unwrap(), x)))
        .collect::<Result<_>>()?;
    let stalks: Vec<ChainComplex> = totals.iter().map(|t| t.complex.clone()).collect();
    let mut transitions = BTreeMap::new();
    for (x, y) in poset.strict_pairs() {
        transitions.insert((x, y), bar_inclusion(&totals[x], &totals[y])?);
    }
    let diagram = PosetDiagram::new(poset.clone(), stalks, transitions)?;
    let field = diagram.stalks[0].field();

    let mut augment = Vec::with_capacity(n);
    for (x, total) in totals.iter().enumerate() {
        let degrees: BTreeSet<i64> = total
            .complex
            .support()
            .into_iter()
            .chain(f.stalk(x).support())
            .collect();
        let mut maps = BTreeMap::new();
        for &m in &degrees {
            let mut mat = Matrix::zero(field, f.stalk(x).dim(m), total.complex.dim(m));
            for pos in 0..total.chains.len() {
                let (k, chain) = &total.chains[pos];
                if *k != 0 {
                    continue;
                }
                let block = f.transition(chain[0], x).component(m);
                if block.rows() > 0 && block.cols() > 0 {
                    mat.set_block(0, total.offset(pos, m), &block);
                }
            }
            maps.insert(m, mat);
        }
        augment.push(ChainMap::new(total.complex.clone(), f.stalk(x).clone(), maps)?);
    }
    let q = DiagramMap::new(diagram.clone(), f.clone(), augment)?;
    let chains_per_element = totals.into_iter().map(|t| t.chains).collect();
    Ok((ReplacementDiagram { diagram, chains_per_element }, q))
}

/// Fibrant replacement QF: the stalk at x is the cosimplicial total complex
/// over chains with minimum >= x; transitions are split projections. Returns
/// QF with its strictly natural pointwise-qis coaugmentation j: f -> QF.
pub fn fibrant_replacement(f: &PosetDiagram) -> Result<(ReplacementDiagram, DiagramMap)> {
    let poset = f.poset().clone();
    let n = poset.len();
    let totals: Vec<BarTotal> = (0..n)
        .map(|x| bar_total(f, BarFlavor::Lim, |c| poset.leq(x, c[0])))
        .collect::<Result<_>>()?;
    let stalks: Vec<ChainComplex> = totals.iter().map(|t| t.complex.clone()).collect();
    let mut transitions = BTreeMap::new();
    for (x, y) in poset.strict_pairs() {
        transitions.insert((x, y), bar_projection(&totals[x], &totals[y])?);
    }
    let diagram = PosetDiagram::new(poset.clone(), stalks, transitions)?;
    let field = diagram.stalks[0].field();

    let mut coaugment = Vec::with_capacity(n);
    for (x, total) in totals.iter().enumerate() {
        let degrees: BTreeSet<i64> = total
            .complex
            .support()
            .into_iter()
            .chain(f.stalk(x).support())
            .collect();
        let mut maps = BTreeMap::new();
        for &m in &degrees {
            let mut mat = Matrix::zero(field, total.complex.dim(m), f.stalk(x).dim(m));
            for pos in 0..total.chains.len() {
                let (k, chain) = &total.chains[pos];
                if *k != 0 {
                    continue;
                }
                let block = f.transition(x, chain[0]).component(m);
                if block.rows() > 0 && block.cols() > 0 {
                    mat.set_block(total.offset(pos, m), 0, &block);
                }
            }
            maps.insert(m, mat);
        }
        coaugment.push(ChainMap::new(f.stalk(x).clone(), total.complex.clone(), maps)?);
    }
    let j = DiagramMap::new(f.clone(), diagram.clone(), coaugment)?;
    let chains_per_element = totals.into_iter().map(|t| t.chains).collect();
    Ok((ReplacementDiagram { diagram, chains_per_element }, j))
}

/// The strictly natural comparison `PF -> constant(hocolim f)` given by the
/// block inclusion of each cofibrant stalk into the full simplicial total.
pub fn colim_comparison(f: &PosetDiagram) -> Result<(ReplacementDiagram, DiagramMap, ChainComplex)> {
    let poset = f.poset().clone();
    let full = bar_total(f, BarFlavor::Colim, |_| true)?;
    let (pf, _q) = cofibrant_replacement(f)?;
    let constant = PosetDiagram::constant(&poset, &full.complex);
    let mut comps = Vec::with_capacity(poset.len());
    for x in 0..poset.len() {
        let small = bar_total(f, BarFlavor::Colim, |c| poset.leq(*c.last().unwrap(), x))?;
        comps.push(bar_inclusion(&small, &full)?);
    }
    let map = DiagramMap::new(pf.diagram.clone(), constant, comps)?;
    Ok((pf, map, full.complex))
}

/// The strictly natural comparison `constant(holim f) -> QF` given by the
/// block projections of the full cosimplicial total onto each fibrant stalk.
pub fn lim_comparison(f: &PosetDiagram) -> Result<(ReplacementDiagram, DiagramMap, ChainComplex)> {
    let poset = f.poset().clone();
    let full = bar_total(f, BarFlavor::Lim, |_| true)?;
    let (qf, _j) = fibrant_replacement(f)?;
    let constant = PosetDiagram::constant(&poset, &full.complex);
    let mut comps = Vec::with_capacity(poset.len());
    for x in 0..poset.len() {
        let small = bar_total(f, BarFlavor::Lim, |c| poset.leq(x, c[0]))?;
        comps.push(bar_projection(&full, &small)?);
    }
    let map = DiagramMap::new(constant, qf.diagram.clone(), comps)?;
    Ok((qf, map, full.complex))
}

/// Diagramwise mapping cone of a strict diagram map. Returns the cone
/// diagram together with the canonical inclusion `target -> cone` and the
/// projection `cone -> source[1]`, both strictly natural.
pub fn diagram_cone(phi: &DiagramMap) -> Result<(PosetDiagram, DiagramMap, DiagramMap)> {
    let poset = phi.source().poset().clone();
    let n = poset.len();
    let cones: Vec<_> = (0..n).map(|x| cone(phi.component(x))).collect();
    let stalks: Vec<ChainComplex> = cones.iter().map(|c| c.complex.clone()).collect();
    let field = stalks
        .first()
        .map(|c| c.field())
        .unwrap_or(crate::linalg::PrimeField::new(2).unwrap());
    let mut transitions = BTreeMap::new();
    for (x, y) in poset.strict_pairs() {
        let ts = phi.source().transition(x, y);
        let tt = phi.target().transition(x, y);
        let degrees: BTreeSet<i64> =
            stalks[x].support().into_iter().chain(stalks[y].support()).collect();
        let mut maps = BTreeMap::new();
        for &i in &degrees {
            let mut m = Matrix::zero(field, stalks[y].dim(i), stalks[x].dim(i));
            m.set_block(0, 0, &ts.component(i - 1));
            m.set_block(
                phi.source().stalk(y).dim(i - 1),
                phi.source().stalk(x).dim(i - 1),
                &tt.component(i),
            );
            maps.insert(i, m);
        }
        transitions.insert((x, y), ChainMap::new(stalks[x].clone(), stalks[y].clone(), maps)?);
    }
    let diagram = PosetDiagram::new(poset.clone(), stalks, transitions)?;
    let inclusion = DiagramMap::new(
        phi.target().clone(),
        diagram.clone(),
        cones.iter().map(|c| c.inclusion.clone()).collect(),
    )?;
    let projection = DiagramMap::new(
        diagram.clone(),
        phi.source().shift(1),
        cones.iter().map(|c| c.projection.clone()).collect(),
    )?;
    Ok((diagram, inclusion, projection))
}

/// Diagramwise fiber (shifted cone) of a strict diagram map, with the
/// canonical projection `fiber -> source`.
pub fn diagram_fiber(phi: &DiagramMap) -> Result<(PosetDiagram, DiagramMap)> {
    let (cone_diag, _inc, proj) = diagram_cone(phi)?;
    let fiber = cone_diag.shift(-1);
    let comps: Vec<ChainMap> = (0..fiber.poset().len())
        .map(|x| proj.component(x).shift(-1))
        .collect();
    let to_source = DiagramMap::new(fiber.clone(), phi.source().clone(), comps)?;
    Ok((fiber, to_source))
}

/// Outcome of one of the two sphericalness condition checks: the composite
/// witness map and whether it is a quasi-isomorphism.
#[derive(Debug, Clone)]
pub struct ConditionWitness {
    pub composite: ChainMap,
    pub holds: bool,
}

fn require_sphere_base(f: &PosetDiagram) -> Result<()> {
    if f.poset().sphere_dimension().is_none() {
        return Err(Error::Unsupported(
            "condition checks require a sphere poset base".into(),
        ));
    }
    Ok(())
}

/// Condition 1 of the 2/4 criterion for the adjunction g* ⊣ g_*: the
/// composite `g_!(f) -> g_* g* g_!(f) -> g_* T'(f)` of the unit with the
/// direct image of the cone inclusion is a quasi-isomorphism. `T'(f)` is the
/// diagramwise cone of the strict comparison `PF -> constant(hocolim f)`.
pub fn check_24_condition1(f: &PosetDiagram) -> Result<ConditionWitness> {
    require_sphere_base(f)?;
    let (_pf, comparison, hc) = colim_comparison(f)?;
    let (_tprime, inclusion, _proj) = diagram_cone(&comparison)?;
    let alpha = holim_map(&inclusion)?;
    let u = unit_map(&hc, f.poset())?;
    let composite = alpha.compose(&u)?;
    let holds = composite.is_qis();
    Ok(ConditionWitness { composite, holds })
}

/// Condition 2 of the 2/4 criterion: the composite
/// `g_!(T_X f) -> g_! g* g_*(f) -> g_*(f)` of the fiber projection with the
/// bar augmentation (counit of g_! ⊣ g*) is a quasi-isomorphism. `T_X(f)` is
/// the diagramwise fiber of the strict comparison `constant(holim f) -> QF`.
pub fn check_24_condition2(f: &PosetDiagram) -> Result<ConditionWitness> {
    require_sphere_base(f)?;
    let (_qf, comparison, hl) = lim_comparison(f)?;
    let (tx, to_constant) = diagram_fiber(&comparison)?;
    let _ = &tx;
    let beta = hocolim_map(&to_constant)?;
    let cu = counit_map(f.poset(), &hl)?;
    let composite = cu.compose(&beta)?;
    let holds = composite.is_qis();
    Ok(ConditionWitness { composite, holds })
}

/// The diagramwise cotwist model used by condition 2, exposed for the
/// homology-level comparison with the sphere twist.
pub fn cotwist_model(f: &PosetDiagram) -> Result<PosetDiagram> {
    let (_qf, comparison, _hl) = lim_comparison(f)?;
    let (tx, _to_constant) = diagram_fiber(&comparison)?;
    Ok(tx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn sphere_poset_shapes() {
        let p0 = sphere_poset(0).unwrap();
        assert_eq!(p0.len(), 2);
        assert!(p0.strict_pairs().is_empty());

        let p1 = sphere_poset(1).unwrap();
        assert_eq!(p1.len(), 4);
        let pairs: Vec<(u32, u32)> = p1
            .strict_pairs()
            .iter()
            .map(|&(x, y)| (p1.label(x), p1.label(y)))
            .collect();
        assert_eq!(pairs, vec![(1, 3), (1, 4), (2, 3), (2, 4)]);

        assert!(sphere_poset(5).is_err());
        assert!(sphere_poset_bounded(5, 5).is_ok());
    }

    #[test]
    fn sphere_dimension_recognized() {
        for n in 0..=3 {
            assert_eq!(sphere_poset(n).unwrap().sphere_dimension(), Some(n));
        }
        let chain2 = FinitePoset::new(vec![1, 2], vec![true, true, false, true]).unwrap();
        assert_eq!(chain2.sphere_dimension(), None);
    }

    #[test]
    fn poset_axioms_enforced() {
        // not antisymmetric
        assert!(FinitePoset::new(vec![1, 2], vec![true, true, true, true]).is_err());
        // not transitive: 1<2, 2<3, but not 1<3
        let leq = vec![
            true, true, false, //
            false, true, true, //
            false, false, true,
        ];
        assert!(FinitePoset::new(vec![1, 2, 3], leq).is_err());
    }

    #[test]
    fn chain_counts() {
        let counts = |p: &FinitePoset| -> Vec<usize> {
            p.nondegenerate_chains().iter().map(|g| g.len()).collect()
        };
        assert_eq!(counts(&sphere_poset(0).unwrap()), vec![2]);
        assert_eq!(counts(&sphere_poset(1).unwrap()), vec![4, 4]);
        assert_eq!(counts(&sphere_poset(2).unwrap()), vec![6, 12, 8]);
        let single = FinitePoset::new(vec![7], vec![true]).unwrap();
        assert_eq!(counts(&single), vec![1]);
    }

    #[test]
    fn chain_euler_characteristic_of_p2() {
        // 6 - 12 + 8 = 2 = chi(S^2)
        let counts: Vec<i64> = sphere_poset(2)
            .unwrap()
            .nondegenerate_chains()
            .iter()
            .map(|g| g.len() as i64)
            .collect();
        let chi: i64 = counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c } else { -c }).sum();
        assert_eq!(chi, 2);
    }

    #[test]
    fn constant_diagram_basics() {
        let p1 = sphere_poset(1).unwrap();
        let k = ChainComplex::unit(f2());
        let d = PosetDiagram::constant(&p1, &k);
        assert_eq!(d.stalk(0), &k);
        let z = PosetDiagram::constant(&p1, &ChainComplex::zero(f2()));
        assert!(z.stalk(3).is_zero());
        let single = FinitePoset::new(vec![1], vec![true]).unwrap();
        let c = ChainComplex::concentrated(f3(), 2, 3);
        assert_eq!(PosetDiagram::constant(&single, &c).stalk(0), &c);
    }

    #[test]
    fn hocolim_over_point_is_stalk() {
        let single = FinitePoset::new(vec![1], vec![true]).unwrap();
        let c = ChainComplex::concentrated(f2(), 1, 2);
        let d = PosetDiagram::constant(&single, &c);
        assert_eq!(hocolim(&d).unwrap().homology(), c.homology());
        assert_eq!(holim(&d).unwrap().homology(), c.homology());
    }

    #[test]
    fn hocolim_constant_k_over_spheres() {
        for (n, p) in [(0usize, 2u64), (1, 2), (2, 3), (3, 2)] {
            let field = PrimeField::new(p).unwrap();
            let poset = sphere_poset(n).unwrap();
            let k = ChainComplex::unit(field);
            let d = PosetDiagram::constant(&poset, &k);
            let hc = hocolim(&d).unwrap();
            let mut expect = BTreeMap::from([(0i64, 1usize)]);
            *expect.entry(n as i64).or_insert(0) += 1;
            assert_eq!(hc.homology(), expect, "hocolim over P_{n}");
            let hl = holim(&d).unwrap();
            let mut expect = BTreeMap::from([(0i64, 1usize)]);
            *expect.entry(-(n as i64)).or_insert(0) += 1;
            assert_eq!(hl.homology(), expect, "holim over P_{n}");
        }
    }

    #[test]
    fn holim_total_dims_over_p2() {
        let poset = sphere_poset(2).unwrap();
        let k = ChainComplex::unit(f2());
        let hl = holim(&PosetDiagram::constant(&poset, &k)).unwrap();
        assert_eq!(hl.dim(0), 6);
        assert_eq!(hl.dim(-1), 12);
        assert_eq!(hl.dim(-2), 8);
    }

    #[test]
    fn unit_and_counit_shapes() {
        let poset = sphere_poset(0).unwrap();
        let k = ChainComplex::unit(f2());
        let cu = counit_map(&poset, &k).unwrap();
        assert_eq!(cu.component(0), Matrix::from_rows(f2(), &[vec![1, 1]]).unwrap());
        assert_eq!(cu.component(0).rank(), 1);

        let u = unit_map(&k, &poset).unwrap();
        assert_eq!(u.component(0), Matrix::from_rows(f2(), &[vec![1], vec![1]]).unwrap());

        let z = ChainComplex::zero(f2());
        assert!(unit_map(&z, &poset).unwrap().is_zero_map());
        assert!(counit_map(&poset, &z).unwrap().is_zero_map());

        let single = FinitePoset::new(vec![1], vec![true]).unwrap();
        let c = ChainComplex::concentrated(f3(), 0, 2);
        let u1 = unit_map(&c, &single).unwrap();
        assert_eq!(u1.component(0), Matrix::identity(f3(), 2));
        let cu1 = counit_map(&single, &c).unwrap();
        assert_eq!(cu1.component(0), Matrix::identity(f3(), 2));
    }

    #[test]
    fn sphere_twist_shifts_homology() {
        let k = ChainComplex::unit(f2());
        assert_eq!(sphere_twist(&k, 0).unwrap().homology(), k.homology());
        assert_eq!(
            sphere_twist(&k, 2).unwrap().homology(),
            BTreeMap::from([(-2, 1)])
        );
        assert!(sphere_twist(&ChainComplex::zero(f2()), 1).unwrap().is_acyclic());
    }

    #[test]
    fn cofibrant_replacement_over_point_is_identity_like() {
        let single = FinitePoset::new(vec![1], vec![true]).unwrap();
        let c = ChainComplex::concentrated(f2(), 0, 2);
        let d = PosetDiagram::constant(&single, &c);
        let (pf, q) = cofibrant_replacement(&d).unwrap();
        assert_eq!(pf.diagram.stalk(0).dims(), c.dims());
        assert!(q.component(0).is_qis());
        let (qf, j) = fibrant_replacement(&d).unwrap();
        assert_eq!(qf.diagram.stalk(0).dims(), c.dims());
        assert!(j.component(0).is_qis());
    }

    #[test]
    fn cofibrant_stalk_dims_over_p1() {
        // chains below a top element of P_1: three 0-chains, two 1-chains
        let poset = sphere_poset(1).unwrap();
        let k = ChainComplex::unit(f2());
        let d = PosetDiagram::constant(&poset, &k);
        let (pf, q) = cofibrant_replacement(&d).unwrap();
        let top = poset.index_of_label(3).unwrap();
        assert_eq!(pf.diagram.stalk(top).dim(0), 3);
        assert_eq!(pf.diagram.stalk(top).dim(1), 2);
        for x in 0..poset.len() {
            assert!(q.component(x).is_qis(), "augmentation not a qis at {x}");
        }
    }

    #[test]
    fn fibrant_stalk_dims_over_p1() {
        let poset = sphere_poset(1).unwrap();
        let k = ChainComplex::unit(f2());
        let d = PosetDiagram::constant(&poset, &k);
        let (qf, j) = fibrant_replacement(&d).unwrap();
        let bottom = poset.index_of_label(1).unwrap();
        // chains with min >= bottom element 1: (1), (3), (4), (1,3), (1,4)
        assert_eq!(qf.diagram.stalk(bottom).dim(0), 3);
        assert_eq!(qf.diagram.stalk(bottom).dim(-1), 2);
        for x in 0..poset.len() {
            assert!(j.component(x).is_qis(), "coaugmentation not a qis at {x}");
        }
    }

    #[test]
    fn colim_comparison_matches_hocolim() {
        let poset = sphere_poset(1).unwrap();
        let k = ChainComplex::unit(f3());
        let d = PosetDiagram::constant(&poset, &k);
        let (_pf, cmp, hc) = colim_comparison(&d).unwrap();
        assert_eq!(hc, hocolim(&d).unwrap());
        for x in 0..poset.len() {
            assert_eq!(cmp.component(x).target().dims(), hc.dims());
        }
    }

    #[test]
    fn conditions_hold_on_constant_and_zero_diagrams() {
        for n in [0usize, 1] {
            let poset = sphere_poset(n).unwrap();
            let k = ChainComplex::unit(f2());
            let d = PosetDiagram::constant(&poset, &k);
            assert!(check_24_condition1(&d).unwrap().holds, "cond1 const P_{n}");
            assert!(check_24_condition2(&d).unwrap().holds, "cond2 const P_{n}");
            let z = PosetDiagram::constant(&poset, &ChainComplex::zero(f2()));
            assert!(check_24_condition1(&z).unwrap().holds);
            assert!(check_24_condition2(&z).unwrap().holds);
        }
    }

    #[test]
    fn conditions_require_sphere_base() {
        let chain2 = FinitePoset::new(vec![1, 2], vec![true, true, false, true]).unwrap();
        let d = PosetDiagram::constant(&chain2, &ChainComplex::unit(f2()));
        assert!(matches!(check_24_condition1(&d), Err(Error::Unsupported(_))));
        assert!(matches!(check_24_condition2(&d), Err(Error::Unsupported(_))));
    }

    #[test]
    fn cotwist_model_matches_sphere_twist_on_homology() {
        for n in [0usize, 1] {
            let poset = sphere_poset(n).unwrap();
            let v = ChainComplex::unit(f3());
            let d = PosetDiagram::constant(&poset, &v);
            let tx = cotwist_model(&d).unwrap();
            let twist_h = sphere_twist(&v, n).unwrap().homology();
            for x in 0..poset.len() {
                assert_eq!(tx.stalk(x).homology(), twist_h, "stalk {x} over P_{n}");
            }
        }
    }

    #[test]
    fn euler_characteristic_identity() {
        for n in 0..=3usize {
            let poset = sphere_poset(n).unwrap();
            let v = ChainComplex::new(
                f2(),
                BTreeMap::from([(1, 1), (0, 2)]),
                BTreeMap::from([(1, Matrix::from_rows(f2(), &[vec![1], vec![0]]).unwrap())]),
            )
            .unwrap();
            let d = PosetDiagram::constant(&poset, &v);
            let factor = 1 + if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(
                hocolim(&d).unwrap().euler_characteristic(),
                v.euler_characteristic() * factor
            );
            assert_eq!(
                holim(&d).unwrap().euler_characteristic(),
                v.euler_characteristic() * factor
            );
        }
    }
}
