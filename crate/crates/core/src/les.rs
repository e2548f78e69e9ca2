//! Splitting the complex at a crossing and the long exact sequence it
//! induces on homology.
//!
//! States with a B marker at the chosen crossing `v` span a subcomplex, and
//! those with an A marker span the quotient. In the parent's grading, with
//! `b` fixed, the sequence reads
//!
//! ```text
//! H_{a,b}(sub) --α*--> H_{a,b}(D) --β*--> H_{a,b}(quot) --∂--> H_{a−2,b}(sub) --> ...
//! ```
//!
//! where the subcomplex at `(a, b)` is the complex of the B-smoothed diagram
//! at `(a+1, b+1)` and the quotient is the A-smoothed diagram at `(a−1, b−1)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::{build_complex, BigradedComplex, GradedBasis, Grading};
use crate::diagram::{torus_diagram, ArcId, LinkDiagram, SmoothedArc};
use crate::error::{Error, Result};
use crate::homology::{AbelianGroup, HomologyTable};
use crate::linalg::{
    dense_invariant_factors, dense_rank, smith_normal_form, smith_normal_form_dense, DenseMatrix,
    IntegerMatrix,
};
use crate::resolution::{CircleSystem, KauffmanState, Marker, Resolver};
use crate::torus::{framed_unknot_kh, predicted_connecting_degree, torus_kh};

/// Parent grading `(a, b)` of the subcomplex corresponds to `(a+1, b+1)` on
/// the B-smoothed diagram.
pub const SUB_SHIFT: Grading = (1, 1);
/// Parent grading `(a, b)` of the quotient corresponds to `(a−1, b−1)` on
/// the A-smoothed diagram.
pub const QUOTIENT_SHIFT: Grading = (-1, -1);

/// The three rows of the sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    /// B marker at the crossing; homology of the B-smoothed diagram.
    Sub,
    Parent,
    /// A marker at the crossing; homology of the A-smoothed diagram.
    Quotient,
}

impl Space {
    pub fn label(self) -> &'static str {
        match self {
            Space::Sub => "H_B",
            Space::Parent => "H",
            Space::Quotient => "H_A",
        }
    }

    /// Grading on this space's own diagram for the parent grading `g`.
    pub fn own_grading(self, g: Grading) -> Grading {
        match self {
            Space::Sub => (g.0 + SUB_SHIFT.0, g.1 + SUB_SHIFT.1),
            Space::Parent => g,
            Space::Quotient => (g.0 + QUOTIENT_SHIFT.0, g.1 + QUOTIENT_SHIFT.1),
        }
    }
}

/// The parent complex together with its B-marker subcomplex and A-marker
/// quotient at one crossing.
#[derive(Clone, Debug)]
pub struct ComplexSplit {
    crossing: usize,
    parent: BigradedComplex,
    sub: BigradedComplex,
    quotient: BigradedComplex,
    /// Positions of subcomplex basis elements inside the parent basis.
    sub_positions: BTreeMap<Grading, Vec<usize>>,
    quotient_positions: BTreeMap<Grading, Vec<usize>>,
}

impl ComplexSplit {
    /// Partitions `parent` by the marker at crossing `v` and checks that the
    /// B-marker part is closed under the differential.
    pub fn from_complex(parent: BigradedComplex, v: usize) -> Result<Self> {
        if v >= parent.crossing_count() {
            return Err(Error::InvalidCrossing {
                index: v,
                count: parent.crossing_count(),
            });
        }
        let mut sub_positions = BTreeMap::new();
        let mut quotient_positions = BTreeMap::new();
        let mut sub_bases = BTreeMap::new();
        let mut quotient_bases = BTreeMap::new();
        for (&g, basis) in parent.bases() {
            let (mut sp, mut qp) = (Vec::new(), Vec::new());
            for (i, e) in basis.states.iter().enumerate() {
                match e.state.marker(v) {
                    Marker::B => sp.push(i),
                    Marker::A => qp.push(i),
                }
            }
            let pick = |ps: &[usize]| GradedBasis {
                grading: g,
                states: ps.iter().map(|&i| basis.states[i]).collect(),
            };
            if !sp.is_empty() {
                sub_bases.insert(g, pick(&sp));
            }
            if !qp.is_empty() {
                quotient_bases.insert(g, pick(&qp));
            }
            sub_positions.insert(g, sp);
            quotient_positions.insert(g, qp);
        }
        let empty: Vec<usize> = Vec::new();
        let mut sub_d = BTreeMap::new();
        let mut quotient_d = BTreeMap::new();
        for (&g, m) in parent.differentials() {
            let t = (g.0 - 2, g.1);
            let (ss, qs) = (&sub_positions[&g], &quotient_positions[&g]);
            let st = sub_positions.get(&t).unwrap_or(&empty);
            let qt = quotient_positions.get(&t).unwrap_or(&empty);
            if !m.select(qt, ss).is_zero() {
                return Err(Error::Internal(format!(
                    "B-marker states are not closed under the differential at {g:?}"
                )));
            }
            if !ss.is_empty() {
                sub_d.insert(g, m.select(st, ss));
            }
            if !qs.is_empty() {
                quotient_d.insert(g, m.select(qt, qs));
            }
        }
        let n = parent.crossing_count();
        Ok(ComplexSplit {
            crossing: v,
            sub: BigradedComplex::from_parts(n, sub_bases, sub_d)?,
            quotient: BigradedComplex::from_parts(n, quotient_bases, quotient_d)?,
            parent,
            sub_positions,
            quotient_positions,
        })
    }

    pub fn crossing(&self) -> usize {
        self.crossing
    }

    pub fn parent(&self) -> &BigradedComplex {
        &self.parent
    }

    pub fn sub(&self) -> &BigradedComplex {
        &self.sub
    }

    pub fn quotient(&self) -> &BigradedComplex {
        &self.quotient
    }

    pub fn complex(&self, space: Space) -> &BigradedComplex {
        match space {
            Space::Sub => &self.sub,
            Space::Parent => &self.parent,
            Space::Quotient => &self.quotient,
        }
    }

    /// Parent positions of the given part's basis at `g`.
    pub fn positions(&self, space: Space, g: Grading) -> Vec<usize> {
        match space {
            Space::Sub => self.sub_positions.get(&g).cloned().unwrap_or_default(),
            Space::Quotient => self.quotient_positions.get(&g).cloned().unwrap_or_default(),
            Space::Parent => (0..self.parent.rank(g)).collect(),
        }
    }

    /// Inclusion of a subcomplex or quotient-basis chain into the parent.
    pub fn embed(&self, space: Space, g: Grading, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.parent.rank(g)];
        for (p, v) in self.positions(space, g).into_iter().zip(x) {
            out[p] = v.clone();
        }
        out
    }

    /// Coordinates of a parent chain on the given part's basis.
    pub fn restrict(&self, space: Space, g: Grading, x: &[BigInt]) -> Vec<BigInt> {
        self.positions(space, g)
            .into_iter()
            .map(|p| x[p].clone())
            .collect()
    }

    /// Dimensions add: `dim C(D) = dim sub + dim quotient` at every grading.
    pub fn is_short_exact(&self) -> bool {
        self.parent
            .gradings()
            .all(|g| self.parent.rank(g) == self.sub.rank(g) + self.quotient.rank(g))
    }
}

/// Splits the complex of `d` at crossing `v` and checks each part against
/// the complex of the corresponding smoothed diagram: the bases correspond
/// marker-for-marker and sign-for-sign with the grading shifts above, the
/// quotient differential agrees exactly, and the subcomplex differential
/// agrees after twisting by `(−1)^{#B markers before v}`.
pub fn split_at_crossing(d: &LinkDiagram, v: usize) -> Result<ComplexSplit> {
    d.check_crossing(v)?;
    let split = ComplexSplit::from_complex(build_complex(d), v)?;
    if !split.is_short_exact() {
        return Err(Error::Internal("split dimensions do not add up".into()));
    }
    verify_smoothing(d, &split, Marker::B)?;
    verify_smoothing(d, &split, Marker::A)?;
    Ok(split)
}

/// Image of every circle of a parent resolution in the resolution of the
/// smoothed diagram.
fn circle_images(
    d: &LinkDiagram,
    arc_map: &BTreeMap<ArcId, SmoothedArc>,
    parent: &CircleSystem,
    child: &CircleSystem,
) -> Result<Vec<usize>> {
    let mismatch = || Error::Internal("circle systems of parent and smoothing disagree".into());
    if parent.circle_count() != child.circle_count() {
        return Err(mismatch());
    }
    let mut image = vec![usize::MAX; parent.circle_count()];
    let mut assign = |from: usize, to: usize| {
        if image[from] != usize::MAX && image[from] != to {
            return Err(mismatch());
        }
        image[from] = to;
        Ok(())
    };
    for arc in d.arcs() {
        let from = parent.circle_of_arc(arc).ok_or_else(mismatch)?;
        let to = match arc_map[&arc] {
            SmoothedArc::Arc(b) => child.circle_of_arc(b).ok_or_else(mismatch)?,
            SmoothedArc::Loop(l) => child.circle_of_loop(l),
        };
        assign(from, to)?;
    }
    for k in 0..d.free_loops() {
        assign(parent.circle_of_loop(k), child.circle_of_loop(k))?;
    }
    let distinct: BTreeSet<usize> = image.iter().copied().collect();
    if distinct.len() != image.len() || distinct.contains(&usize::MAX) {
        return Err(mismatch());
    }
    Ok(image)
}

fn verify_smoothing(d: &LinkDiagram, split: &ComplexSplit, marker: Marker) -> Result<()> {
    let v = split.crossing;
    let (child, arc_map) = d.smooth_crossing(v, marker)?;
    let cc = build_complex(&child);
    let (part, shift) = match marker {
        Marker::B => (&split.sub, SUB_SHIFT),
        Marker::A => (&split.quotient, QUOTIENT_SHIFT),
    };
    let parent_res = Resolver::new(d);
    let child_res = Resolver::new(&child);
    let index: HashMap<(u64, u64), (Grading, usize)> = cc
        .bases()
        .iter()
        .flat_map(|(&g, b)| {
            b.states
                .iter()
                .enumerate()
                .map(move |(i, e)| ((e.state.b_mask(), e.minus_mask), (g, i)))
        })
        .collect();
    let fail = |what: String| {
        Err(Error::Internal(format!(
            "smoothing at crossing {v}: {what}"
        )))
    };
    let mut phi: BTreeMap<Grading, Vec<usize>> = BTreeMap::new();
    let mut twist: BTreeMap<Grading, Vec<i64>> = BTreeMap::new();
    for (&g, basis) in part.bases() {
        let target = (g.0 + shift.0, g.1 + shift.1);
        if cc.rank(target) != basis.states.len() {
            return fail(format!("rank mismatch at {g:?}"));
        }
        let mut positions = Vec::with_capacity(basis.states.len());
        let mut signs = Vec::with_capacity(basis.states.len());
        for e in &basis.states {
            let mask = e.state.b_mask();
            let low = mask & ((1u64 << v) - 1);
            let cs_state =
                KauffmanState::from_mask((mask >> (v + 1)) << v | low, e.state.len() - 1);
            let image = circle_images(
                d,
                &arc_map,
                &parent_res.smooth(&e.state)?,
                &child_res.smooth(&cs_state)?,
            )?;
            let minus = (0..e.circles)
                .filter(|&j| !e.sign(j))
                .fold(0u64, |m, j| m | 1 << image[j]);
            match index.get(&(cs_state.b_mask(), minus)) {
                Some(&(h, pos)) if h == target => positions.push(pos),
                _ => return fail(format!("state {} has no partner at {target:?}", e.state)),
            }
            let before = (e.state.b_mask() & ((1u64 << v) - 1)).count_ones();
            signs.push(if marker == Marker::B && before % 2 == 1 {
                -1
            } else {
                1
            });
        }
        let distinct: BTreeSet<usize> = positions.iter().copied().collect();
        if distinct.len() != positions.len() {
            return fail(format!("basis map not injective at {g:?}"));
        }
        phi.insert(g, positions);
        twist.insert(g, signs);
    }
    for (&g, m) in part.differentials() {
        let t = (g.0 - 2, g.1);
        let cm = cc.differential((g.0 + shift.0, g.1 + shift.1));
        if m.nnz() != cm.nnz() {
            return fail(format!("differential size mismatch at {g:?}"));
        }
        for (r, c, val) in m.triplets() {
            let expected = val * twist[&t][r] * twist[&g][c];
            if cm.get(phi[&t][r], phi[&g][c]) != expected {
                return fail(format!("differential entry mismatch at {g:?}"));
            }
        }
    }
    Ok(())
}

/// Integral homology at one grading with explicit cycle generators.
///
/// Generators are ordered as the invariant factors of the presentation:
/// torsion generators first, by increasing order, then free generators.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    grading: Grading,
    d_out: IntegerMatrix,
    /// Rows send a cycle to its coordinates on the generators.
    coords: DenseMatrix,
    /// Order of each generator; zero for free generators.
    factors: Vec<BigInt>,
    generators: Vec<Vec<BigInt>>,
}

impl HomologyBasis {
    /// Homology of `C_g` with outgoing differential `d_out` and incoming
    /// differential `d_in`.
    pub fn new(d_out: &IntegerMatrix, d_in: &IntegerMatrix, grading: Grading) -> Result<Self> {
        let n = d_out.cols();
        if d_in.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "incoming differential has {} rows, chain group has rank {n}",
                d_in.rows()
            )));
        }
        if !d_out.mul(d_in)?.is_zero() {
            return Err(Error::NotAComplex {
                a: grading.0 + 2,
                b: grading.1,
            });
        }
        // Kernel of d_out from the column transform of its normal form.
        let out = smith_normal_form(d_out);
        let r = out.rank();
        let kernel = out.v.select_cols(r..n);
        let kernel_coords = out.v_inv.select_rows(r..n);
        // Boundaries written in kernel coordinates, then diagonalised.
        let boundaries = kernel_coords.mul(&d_in.to_dense());
        let pres = smith_normal_form_dense(&boundaries);
        let k = n - r;
        let all_factors: Vec<BigInt> = (0..k)
            .map(|i| pres.invariant_factors.get(i).cloned().unwrap_or_default())
            .collect();
        let kept: Vec<usize> = (0..k).filter(|&i| !all_factors[i].is_one()).collect();
        let coords = pres.u.mul(&kernel_coords).select_rows(kept.iter().copied());
        let generators = kept
            .iter()
            .map(|&i| kernel.mul_vec(&pres.u_inv.column(i)))
            .collect();
        Ok(HomologyBasis {
            grading,
            d_out: d_out.clone(),
            coords,
            factors: kept.iter().map(|&i| all_factors[i].clone()).collect(),
            generators,
        })
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn group(&self) -> AbelianGroup {
        AbelianGroup {
            free_rank: self.factors.iter().filter(|f| f.is_zero()).count(),
            torsion: self
                .factors
                .iter()
                .filter(|f| !f.is_zero())
                .map(|f| u64::try_from(f).expect("torsion order fits in 64 bits"))
                .collect(),
        }
    }

    /// Coordinates of the class of cycle `z`, torsion coordinates reduced
    /// into `0..order`.
    pub fn express(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        if z.len() != self.d_out.cols() {
            return Err(Error::DimensionMismatch(format!(
                "chain of length {} in a group of rank {}",
                z.len(),
                self.d_out.cols()
            )));
        }
        if self.d_out.mul_vec(z)?.iter().any(|x| !x.is_zero()) {
            return Err(Error::Internal(format!(
                "chain at {:?} is not a cycle",
                self.grading
            )));
        }
        Ok(self
            .coords
            .mul_vec(z)
            .into_iter()
            .zip(&self.factors)
            .map(|(c, f)| if f.is_zero() { c } else { c.mod_floor(f) })
            .collect())
    }

    pub fn is_zero_class(&self, z: &[BigInt]) -> Result<bool> {
        Ok(self.express(z)?.iter().all(Zero::is_zero))
    }
}

/// Homology basis of one part of the split at parent grading `g`.
pub fn homology_basis(split: &ComplexSplit, space: Space, g: Grading) -> Result<HomologyBasis> {
    let c = split.complex(space);
    HomologyBasis::new(&c.differential(g), &c.differential((g.0 + 2, g.1)), g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapKind {
    /// Inclusion of the subcomplex.
    Alpha,
    /// Projection onto the quotient.
    Beta,
    /// Connecting map from the quotient to the subcomplex.
    Connecting,
}

impl MapKind {
    pub fn label(self) -> &'static str {
        match self {
            MapKind::Alpha => "a*",
            MapKind::Beta => "b*",
            MapKind::Connecting => "conn",
        }
    }

    /// Source and target spaces with parent gradings, for a map whose
    /// source sits at parent grading `g`.
    pub fn ends(self, g: Grading) -> ((Space, Grading), (Space, Grading)) {
        match self {
            MapKind::Alpha => ((Space::Sub, g), (Space::Parent, g)),
            MapKind::Beta => ((Space::Parent, g), (Space::Quotient, g)),
            MapKind::Connecting => ((Space::Quotient, g), (Space::Sub, (g.0 - 2, g.1))),
        }
    }
}

/// A map on homology written on generators: column `i` holds the image of
/// source generator `i`.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub kind: MapKind,
    /// Parent grading of the source.
    pub at: Grading,
    pub matrix: DenseMatrix,
    pub source_factors: Vec<BigInt>,
    pub target_factors: Vec<BigInt>,
}

impl InducedMap {
    /// Source space and its own-diagram grading.
    pub fn source(&self) -> (Space, Grading) {
        let (s, g) = self.kind.ends(self.at).0;
        (s, s.own_grading(g))
    }

    pub fn target(&self) -> (Space, Grading) {
        let (t, g) = self.kind.ends(self.at).1;
        (t, t.own_grading(g))
    }

    /// Rank over the rationals (free generators only).
    pub fn rational_rank(&self) -> usize {
        let rows: Vec<usize> = free_indices(&self.target_factors);
        let cols: Vec<usize> = free_indices(&self.source_factors);
        if rows.is_empty() || cols.is_empty() {
            return 0;
        }
        dense_rank(&self.matrix.select_rows(rows).select_cols(cols))
    }

    /// Whether the map is onto the target group.
    pub fn is_surjective(&self) -> bool {
        let q = self.target_factors.len();
        let relations = torsion_relations(&self.target_factors);
        let m = self.matrix.hconcat(&relations);
        let f = dense_invariant_factors(m);
        f.len() == q && f.iter().all(One::is_one)
    }

    /// Whether the map has trivial kernel on the source group.
    pub fn is_injective(&self) -> bool {
        let p = self.source_factors.len();
        if p == 0 {
            return true;
        }
        // x maps to zero iff (x, y) solves M x = R y for the target
        // relations R; every such x must already vanish in the source.
        let relations = torsion_relations(&self.target_factors);
        let mut neg = relations.clone();
        for i in 0..neg.rows() {
            neg.negate_row(i);
        }
        let a = self.matrix.hconcat(&neg);
        let snf = smith_normal_form_dense(&a);
        let r = snf.rank();
        (r..a.cols()).all(|j| {
            let col = snf.v.column(j);
            col[..p].iter().zip(&self.source_factors).all(|(x, e)| {
                if e.is_zero() {
                    x.is_zero()
                } else {
                    x.is_multiple_of(e)
                }
            })
        })
    }
}

fn free_indices(factors: &[BigInt]) -> Vec<usize> {
    (0..factors.len())
        .filter(|&i| factors[i].is_zero())
        .collect()
}

/// Columns `f_j e_j` for every torsion generator `j` of a target group.
fn torsion_relations(factors: &[BigInt]) -> DenseMatrix {
    let torsion: Vec<usize> = (0..factors.len())
        .filter(|&i| !factors[i].is_zero())
        .collect();
    let mut r = DenseMatrix::zeros(factors.len(), torsion.len());
    for (k, &j) in torsion.iter().enumerate() {
        r.set(j, k, factors[j].clone());
    }
    r
}

/// Chain-level image under the connecting map: lift the quotient cycle `z`
/// (plus an optional subcomplex chain `offset`) to the parent, apply the
/// differential, and read off the subcomplex part at `(a−2, b)`.
pub fn connecting_image(
    split: &ComplexSplit,
    g: Grading,
    z: &[BigInt],
    offset: Option<&[BigInt]>,
) -> Result<Vec<BigInt>> {
    let mut lift = split.embed(Space::Quotient, g, z);
    if let Some(o) = offset {
        for (p, v) in split.positions(Space::Sub, g).into_iter().zip(o) {
            lift[p] += v;
        }
    }
    let t = (g.0 - 2, g.1);
    let image = split.parent.differential(g).mul_vec(&lift)?;
    if split
        .restrict(Space::Quotient, t, &image)
        .iter()
        .any(|x| !x.is_zero())
    {
        return Err(Error::Internal(format!(
            "quotient chain at {g:?} is not a cycle"
        )));
    }
    Ok(split.restrict(Space::Sub, t, &image))
}

fn chain_image(
    split: &ComplexSplit,
    kind: MapKind,
    g: Grading,
    z: &[BigInt],
) -> Result<Vec<BigInt>> {
    match kind {
        MapKind::Alpha => Ok(split.embed(Space::Sub, g, z)),
        MapKind::Beta => Ok(split.restrict(Space::Quotient, g, z)),
        MapKind::Connecting => connecting_image(split, g, z, None),
    }
}

/// Matrix of `kind` on homology from the source basis to the target basis.
pub fn induced_map(
    split: &ComplexSplit,
    kind: MapKind,
    source: &HomologyBasis,
    target: &HomologyBasis,
) -> Result<InducedMap> {
    let g = source.grading();
    let columns = source
        .generators()
        .iter()
        .map(|z| target.express(&chain_image(split, kind, g, z)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(InducedMap {
        kind,
        at: g,
        matrix: DenseMatrix::from_columns(target.len(), &columns),
        source_factors: source.factors().to_vec(),
        target_factors: target.factors().to_vec(),
    })
}

/// Whether `kind` sends every boundary of the source grading to a boundary,
/// i.e. is well defined on homology there.
pub fn preserves_boundaries(
    split: &ComplexSplit,
    kind: MapKind,
    source: &HomologyBasis,
    target: &HomologyBasis,
) -> Result<bool> {
    let g = source.grading();
    let (space, _) = kind.ends(g).0;
    let d_in = split.complex(space).differential((g.0 + 2, g.1));
    for j in 0..d_in.cols() {
        let mut x = vec![BigInt::zero(); d_in.cols()];
        x[j] = BigInt::one();
        let boundary = d_in.mul_vec(&x)?;
        if !target.is_zero_class(&chain_image(split, kind, g, &boundary)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Homology bases of all three parts and the maps between them.
#[derive(Clone, Debug)]
pub struct LongExactSequence {
    crossing: usize,
    bases: BTreeMap<(Space, Grading), std::result::Result<HomologyBasis, Error>>,
    maps: BTreeMap<(MapKind, Grading), std::result::Result<InducedMap, Error>>,
}

impl LongExactSequence {
    pub fn compute(split: &ComplexSplit) -> Self {
        let mut gradings: BTreeSet<Grading> = split.parent.gradings().collect();
        let below: Vec<Grading> = gradings.iter().map(|g| (g.0 - 2, g.1)).collect();
        gradings.extend(below);
        let keys: Vec<(Space, Grading)> = gradings
            .iter()
            .flat_map(|&g| [Space::Sub, Space::Parent, Space::Quotient].map(|s| (s, g)))
            .collect();
        let bases: BTreeMap<(Space, Grading), _> = keys
            .par_iter()
            .map(|&(s, g)| ((s, g), homology_basis(split, s, g)))
            .collect();
        let jobs: Vec<(MapKind, Grading)> = gradings
            .iter()
            .flat_map(|&g| [MapKind::Alpha, MapKind::Beta, MapKind::Connecting].map(|k| (k, g)))
            .filter(|&(k, g)| bases.contains_key(&k.ends(g).1))
            .collect();
        let maps = jobs
            .par_iter()
            .map(|&(k, g)| {
                let (s, t) = k.ends(g);
                let m = match (&bases[&s], &bases[&t]) {
                    (Ok(sb), Ok(tb)) => induced_map(split, k, sb, tb),
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                };
                ((k, g), m)
            })
            .collect();
        LongExactSequence {
            crossing: split.crossing,
            bases,
            maps,
        }
    }

    pub fn crossing(&self) -> usize {
        self.crossing
    }

    pub fn basis(&self, space: Space, g: Grading) -> Option<&HomologyBasis> {
        self.bases.get(&(space, g)).and_then(|b| b.as_ref().ok())
    }

    pub fn map(&self, kind: MapKind, g: Grading) -> Option<&InducedMap> {
        self.maps.get(&(kind, g)).and_then(|m| m.as_ref().ok())
    }

    pub fn maps(&self) -> impl Iterator<Item = &InducedMap> {
        self.maps.values().filter_map(|m| m.as_ref().ok())
    }

    /// Homology of one part, keyed by its own diagram's gradings.
    pub fn table(&self, space: Space) -> Result<HomologyTable> {
        let mut t = HomologyTable::framed();
        for (&(s, g), b) in &self.bases {
            if s == space {
                let b = b.as_ref().map_err(Clone::clone)?;
                t.insert(s.own_grading(g), b.group());
            }
        }
        Ok(t)
    }

    /// Exactness over ℚ at every node: rank of the incoming map plus rank
    /// of the outgoing map equals the free rank of the node.
    pub fn exactness(&self) -> ExactnessReport {
        let mut nodes = Vec::new();
        let mut failures = Vec::new();
        let mut gradings: Vec<Grading> = self.bases.keys().map(|k| k.1).collect();
        gradings.dedup();
        gradings.sort_by_key(|&(a, b)| (-b, -a));
        gradings.dedup();
        let rank_of = |k: MapKind, g: Grading| -> std::result::Result<usize, String> {
            match self.maps.get(&(k, g)) {
                Some(Ok(m)) => Ok(m.rational_rank()),
                Some(Err(e)) => Err(e.to_string()),
                // source grading outside the complex: zero map
                None => Ok(0),
            }
        };
        for &g in &gradings {
            for (space, incoming, outgoing) in [
                (
                    Space::Sub,
                    (MapKind::Connecting, (g.0 + 2, g.1)),
                    (MapKind::Alpha, g),
                ),
                (Space::Parent, (MapKind::Alpha, g), (MapKind::Beta, g)),
                (
                    Space::Quotient,
                    (MapKind::Beta, g),
                    (MapKind::Connecting, g),
                ),
            ] {
                let own = space.own_grading(g);
                let name = format!("{}({},{})", space.label(), own.0, own.1);
                let verdict = match (
                    &self.bases[&(space, g)],
                    rank_of(incoming.0, incoming.1),
                    rank_of(outgoing.0, outgoing.1),
                ) {
                    (Ok(b), Ok(rin), Ok(rout)) => {
                        let group = b.group();
                        let exact = rin + rout == group.free_rank;
                        if !exact {
                            failures.push(format!(
                                "{name}: incoming rank {rin} + outgoing rank {rout} != free rank {}",
                                group.free_rank
                            ));
                        }
                        NodeVerdict {
                            space,
                            at: g,
                            group: Some(group),
                            rank_in: rin,
                            rank_out: rout,
                            exact,
                        }
                    }
                    (b, rin, rout) => {
                        let why = [
                            b.as_ref().err().map(ToString::to_string),
                            rin.err(),
                            rout.err(),
                        ]
                        .into_iter()
                        .flatten()
                        .next()
                        .unwrap_or_default();
                        failures.push(format!("{name}: {why}"));
                        NodeVerdict {
                            space,
                            at: g,
                            group: b.as_ref().ok().map(HomologyBasis::group),
                            rank_in: 0,
                            rank_out: 0,
                            exact: false,
                        }
                    }
                };
                nodes.push(verdict);
            }
        }
        ExactnessReport {
            crossing: self.crossing,
            nodes,
            failures,
        }
    }
}

/// Verdict at one node of the sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeVerdict {
    pub space: Space,
    /// Parent grading.
    pub at: Grading,
    /// `None` when the group could not be computed.
    pub group: Option<AbelianGroup>,
    pub rank_in: usize,
    pub rank_out: usize,
    pub exact: bool,
}

impl NodeVerdict {
    pub fn own_grading(&self) -> Grading {
        self.space.own_grading(self.at)
    }

    fn name(&self) -> String {
        let (a, b) = self.own_grading();
        let g = self
            .group
            .as_ref()
            .map_or("?".to_string(), ToString::to_string);
        format!("{}({a},{b})[{g}]", self.space.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub crossing: usize,
    /// Nodes in sequence order: `b` descending, then `a` descending, each
    /// grading contributing subcomplex, parent, quotient.
    pub nodes: Vec<NodeVerdict>,
    pub failures: Vec<String>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.failures.is_empty()
    }

    fn node(&self, space: Space, g: Grading) -> Option<&NodeVerdict> {
        self.nodes.iter().find(|n| n.space == space && n.at == g)
    }

    /// One line per parent grading with a nontrivial group among
    /// `H_B(a+1,b+1) → H(a,b) → H_A(a−1,b−1) → H_B(a−1,b+1)`, followed by
    /// the verdict.
    pub fn render_text(&self) -> String {
        let mut out = format!("long exact sequence at crossing {}\n", self.crossing);
        let mut gradings: Vec<Grading> = self.nodes.iter().map(|n| n.at).collect();
        gradings.dedup();
        for g in gradings {
            let (Some(s), Some(p), Some(q)) = (
                self.node(Space::Sub, g),
                self.node(Space::Parent, g),
                self.node(Space::Quotient, g),
            ) else {
                continue;
            };
            let next = self.node(Space::Sub, (g.0 - 2, g.1));
            let trivial = |n: &NodeVerdict| n.group.as_ref().is_some_and(AbelianGroup::is_trivial);
            if [s, p, q].into_iter().chain(next).all(trivial) {
                continue;
            }
            let next_name = next.map_or_else(
                || {
                    let (a, b) = Space::Sub.own_grading((g.0 - 2, g.1));
                    format!("H_B({a},{b})[0]")
                },
                NodeVerdict::name,
            );
            out.push_str(&format!(
                "{} --a*--> {} --b*--> {} --conn--> {}   ranks a*={} b*={} conn={}\n",
                s.name(),
                p.name(),
                q.name(),
                next_name,
                s.rank_out,
                p.rank_out,
                q.rank_out
            ));
        }
        if self.is_exact() {
            out.push_str(&format!("exact at all {} nodes\n", self.nodes.len()));
        } else {
            for f in &self.failures {
                out.push_str(&format!("INEXACT {f}\n"));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .map(|n| {
                let (a, b) = n.own_grading();
                json!({
                    "space": n.space.label(),
                    "a": a,
                    "b": b,
                    "parent_a": n.at.0,
                    "parent_b": n.at.1,
                    "free_rank": n.group.as_ref().map(|g| g.free_rank),
                    "torsion": n.group.as_ref().map(|g| g.torsion.clone()),
                    "rank_in": n.rank_in,
                    "rank_out": n.rank_out,
                    "exact": n.exact,
                })
            })
            .collect();
        json!({
            "crossing": self.crossing,
            "exact": self.is_exact(),
            "nodes": nodes,
            "failures": self.failures,
        })
    }
}

/// Splits `d` at `v` and checks exactness of the whole sequence over ℚ.
pub fn verify_les_exact(d: &LinkDiagram, v: usize) -> Result<ExactnessReport> {
    let split = split_at_crossing(d, v)?;
    Ok(LongExactSequence::compute(&split).exactness())
}

/// All induced maps of the sequence; fails if any homology group cannot be
/// computed.
pub fn induced_maps(split: &ComplexSplit) -> Result<Vec<InducedMap>> {
    let les = LongExactSequence::compute(split);
    les.maps.into_values().collect::<Result<Vec<_>>>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaPrediction {
    Mono,
    Epi,
    Iso,
    /// Neither hypothesis holds.
    Unknown,
}

/// Prediction for `β*: H_{a,b}(D) → H_{a−1,b−1}(D_A)` from the vanishing of
/// `H_{a+1,b+1}(D_B)` (mono) and `H_{a−1,b+1}(D_B)` (epi), with what was
/// observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaCheck {
    pub at: Grading,
    pub prediction: BetaPrediction,
    pub observed_mono: bool,
    pub observed_epi: bool,
}

impl BetaCheck {
    /// Whether the observation agrees with the prediction; vacuous when
    /// nothing is predicted.
    pub fn confirmed(&self) -> bool {
        match self.prediction {
            BetaPrediction::Mono => self.observed_mono,
            BetaPrediction::Epi => self.observed_epi,
            BetaPrediction::Iso => self.observed_mono && self.observed_epi,
            BetaPrediction::Unknown => true,
        }
    }
}

pub fn check_beta(split: &ComplexSplit, a: i64, b: i64) -> Result<BetaCheck> {
    let g = (a, b);
    let upper = homology_basis(split, Space::Sub, g)?.group().is_trivial();
    let lower = homology_basis(split, Space::Sub, (a - 2, b))?
        .group()
        .is_trivial();
    let prediction = match (upper, lower) {
        (true, true) => BetaPrediction::Iso,
        (true, false) => BetaPrediction::Mono,
        (false, true) => BetaPrediction::Epi,
        (false, false) => BetaPrediction::Unknown,
    };
    let beta = induced_map(
        split,
        MapKind::Beta,
        &homology_basis(split, Space::Parent, g)?,
        &homology_basis(split, Space::Quotient, g)?,
    )?;
    Ok(BetaCheck {
        at: g,
        prediction,
        observed_mono: beta.is_injective(),
        observed_epi: beta.is_surjective(),
    })
}

pub fn beta_check(d: &LinkDiagram, v: usize, a: i64, b: i64) -> Result<BetaCheck> {
    check_beta(&split_at_crossing(d, v)?, a, b)
}

/// The connecting map out of one quotient grading.
#[derive(Clone, Debug)]
pub struct ConnectingProbe {
    pub map: InducedMap,
    pub source: AbelianGroup,
    pub target: AbelianGroup,
}

impl ConnectingProbe {
    /// `|m|` when the map is `ℤ → ℤ`, multiplication by `m`.
    pub fn degree(&self) -> Option<u64> {
        let z = AbelianGroup::free(1);
        if self.source != z || self.target != z {
            return None;
        }
        u64::try_from(self.map.matrix.get(0, 0).abs()).ok()
    }
}

/// Connecting map from the quotient at parent grading `g`.
pub fn probe_connecting(split: &ComplexSplit, g: Grading) -> Result<ConnectingProbe> {
    let src = homology_basis(split, Space::Quotient, g)?;
    let tgt = homology_basis(split, Space::Sub, (g.0 - 2, g.1))?;
    Ok(ConnectingProbe {
        map: induced_map(split, MapKind::Connecting, &src, &tgt)?,
        source: src.group(),
        target: tgt.group(),
    })
}

/// Parent grading `(2−n, 4−3n)` where, for `T(2, n)`, the connecting map
/// runs from the bottom group of `T(2, n−1)` to the lower group of the
/// framed unknot with `1−n` kinks.
pub fn bottom_connecting_grading(crossings: usize) -> Grading {
    let n = crossings as i64;
    (2 - n, 4 - 3 * n)
}

/// `|degree|` of that connecting map for `T(2, n)` split at crossing 0.
pub fn torus_connecting_degree(n: i64) -> Result<u64> {
    let d = torus_diagram(n)?;
    let split = split_at_crossing(&d, 0)?;
    let probe = probe_connecting(&split, bottom_connecting_grading(d.crossing_count()))?;
    probe.degree().ok_or_else(|| {
        Error::Internal(format!(
            "connecting map runs {} -> {}, not Z -> Z",
            probe.source, probe.target
        ))
    })
}

/// One step of the induction computing `H(T(2, n))` from `H(T(2, n−1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionStep {
    pub n: i64,
    /// Homology of the B-smoothing equals the framed unknot with `1−n` kinks.
    pub sub_matches: bool,
    /// Homology of the A-smoothing equals the closed form for `T(2, n−1)`.
    pub quotient_matches: bool,
    /// Homology of `T(2, n)` equals its closed form.
    pub parent_matches: bool,
    pub exact: bool,
    pub degree: u64,
    pub predicted_degree: u64,
}

impl InductionStep {
    pub fn holds(&self) -> bool {
        self.sub_matches
            && self.quotient_matches
            && self.parent_matches
            && self.exact
            && self.degree == self.predicted_degree
    }
}

/// Replays the inductive step for `T(2, n)`, `n ≥ 3`, at crossing 0.
pub fn replay_torus_step(n: i64) -> Result<InductionStep> {
    if n < 3 {
        return Err(Error::TorusParameter { min: 3, got: n });
    }
    let d = torus_diagram(n)?;
    let split = split_at_crossing(&d, 0)?;
    let les = LongExactSequence::compute(&split);
    let probe = probe_connecting(&split, bottom_connecting_grading(d.crossing_count()))?;
    Ok(InductionStep {
        n,
        sub_matches: les.table(Space::Sub)? == framed_unknot_kh(1 - n),
        quotient_matches: les.table(Space::Quotient)? == torus_kh(n - 1)?,
        parent_matches: les.table(Space::Parent)? == torus_kh(n)?,
        exact: les.exactness().is_exact(),
        degree: probe.degree().unwrap_or(u64::MAX),
        predicted_degree: predicted_connecting_degree(n)?,
    })
}
