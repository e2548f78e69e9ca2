//! The bigraded chain complex spanned by enhanced states.
//!
//! `∂_{a,b}: C_{a,b} → C_{a−2,b}` sends an enhanced state to the signed sum
//! of the states obtained by switching one A marker to B such that τ grows
//! by one and circles away from the switched crossing keep their signs.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;
use crate::resolution::{sign_masks, CircleSystem, EnhancedState, KauffmanState, Marker, Resolver};

pub type Grading = (i64, i64);

/// Ordered basis of one chain group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub grading: Grading,
    pub states: Vec<EnhancedState>,
}

#[derive(Clone, Debug)]
pub struct BigradedComplex {
    crossings: usize,
    bases: BTreeMap<Grading, GradedBasis>,
    /// `∂_{a,b}` keyed by its source grading; rows index the basis at
    /// `(a − 2, b)` (zero rows if that group is trivial).
    differentials: BTreeMap<Grading, IntegerMatrix>,
}

/// How switching one crossing from A to B changes the circle system.
#[derive(Clone, Debug)]
enum Change {
    /// Circles `c1` and `c2` merge into `into`.
    Fusion { c1: u8, c2: u8, into: u8 },
    /// Circle `c` splits into `n1` and `n2`.
    Split { c: u8, n1: u8, n2: u8 },
}

#[derive(Clone, Debug)]
struct Transition {
    crossing: usize,
    target: KauffmanState,
    change: Change,
    /// Image of every source circle not touching the crossing.
    untouched: Vec<(u8, u8)>,
}

fn transition(resolver: &Resolver, s: &KauffmanState, from: &CircleSystem, v: usize) -> Transition {
    let target = s.with_marker(v, Marker::B);
    let to = resolver.smooth_unchecked(&target);
    // A joins slots 1-2 and 3-4; B joins 1-4 and 2-3.
    let (c1, c2) = (from.circle_of_slot(v, 0), from.circle_of_slot(v, 2));
    let change = if c1 != c2 {
        Change::Fusion {
            c1: c1 as u8,
            c2: c2 as u8,
            into: to.circle_of_slot(v, 0) as u8,
        }
    } else {
        Change::Split {
            c: c1 as u8,
            n1: to.circle_of_slot(v, 0) as u8,
            n2: to.circle_of_slot(v, 1) as u8,
        }
    };
    let touched = |c: usize| c == c1 || c == c2;
    // Every untouched circle has a representative arc or is a free loop,
    // and keeps its identity in the target.
    let mut untouched = Vec::new();
    let mut seen = vec![false; from.circle_count()];
    for cr in 0..resolver.crossing_count() {
        for slot in 0..4 {
            let c = from.circle_of_slot(cr, slot);
            if !seen[c] && !touched(c) {
                seen[c] = true;
                untouched.push((c as u8, to.circle_of_slot(cr, slot) as u8));
            }
        }
    }
    for k in 0..from.free_loop_count() {
        untouched.push((from.circle_of_loop(k) as u8, to.circle_of_loop(k) as u8));
    }
    Transition {
        crossing: v,
        target,
        change,
        untouched,
    }
}

/// Targets of the differential applied to one enhanced state through one
/// transition: `(target minus-mask)` list, empty when non-incident.
fn targets(t: &Transition, minus: u64) -> Vec<u64> {
    let neg = |c: u8| minus >> c & 1 == 1;
    let mut base = 0u64;
    for &(from, to) in &t.untouched {
        if neg(from) {
            base |= 1 << to;
        }
    }
    match t.change {
        Change::Fusion { c1, c2, into } => match (neg(c1), neg(c2)) {
            (false, false) => vec![],
            (true, true) => vec![base | 1 << into],
            _ => vec![base],
        },
        Change::Split { c, n1, n2 } => {
            if neg(c) {
                vec![base | 1 << n2, base | 1 << n1]
            } else {
                vec![base]
            }
        }
    }
}

/// Number of crossings after `v` (in the diagram ordering) carrying a B
/// marker in `s`; the differential term through `v` has sign `(−1)^t`.
pub fn t_sign(s: &EnhancedState, v: usize) -> Result<u32> {
    if v >= s.state.len() {
        return Err(Error::InvalidCrossing {
            index: v,
            count: s.state.len(),
        });
    }
    Ok((s.state.b_mask() >> (v + 1)).count_ones())
}

fn check_state(resolver: &Resolver, s: &EnhancedState) -> Result<CircleSystem> {
    let cs = resolver.smooth(&s.state)?;
    if cs.circle_count() != s.circles {
        return Err(Error::DimensionMismatch(format!(
            "enhanced state has {} signs but its smoothing has {} circles",
            s.circles,
            cs.circle_count()
        )));
    }
    Ok(cs)
}

/// Incidence number of `s` and `t` on the diagram `d`: 1 when `t` arises
/// from `s` by switching a single A marker to B with τ increasing by one
/// and every circle away from that crossing keeping its sign.
pub fn incidence(d: &LinkDiagram, s: &EnhancedState, t: &EnhancedState) -> Result<u8> {
    let resolver = Resolver::new(d);
    let from = check_state(&resolver, s)?;
    check_state(&resolver, t)?;
    let diff = s.state.b_mask() ^ t.state.b_mask();
    if diff.count_ones() != 1 {
        return Ok(0);
    }
    let v = diff.trailing_zeros() as usize;
    if s.state.marker(v) != Marker::A {
        return Ok(0);
    }
    if t.tau() != s.tau() + 1 {
        return Ok(0);
    }
    let tr = transition(&resolver, &s.state, &from, v);
    for &(a, b) in &tr.untouched {
        if s.sign(a as usize) != t.sign(b as usize) {
            return Ok(0);
        }
    }
    Ok(1)
}

impl BigradedComplex {
    pub fn crossing_count(&self) -> usize {
        self.crossings
    }

    pub fn gradings(&self) -> impl Iterator<Item = Grading> + '_ {
        self.bases.keys().copied()
    }

    pub fn basis(&self, g: Grading) -> Option<&GradedBasis> {
        self.bases.get(&g)
    }

    pub fn bases(&self) -> &BTreeMap<Grading, GradedBasis> {
        &self.bases
    }

    pub fn rank(&self, g: Grading) -> usize {
        self.bases.get(&g).map_or(0, |b| b.states.len())
    }

    pub fn total_rank(&self) -> usize {
        self.bases.values().map(|b| b.states.len()).sum()
    }

    /// `∂_{a,b}`; a `0 × 0`-style matrix of the right shape when either end
    /// is trivial.
    pub fn differential(&self, g: Grading) -> IntegerMatrix {
        match self.differentials.get(&g) {
            Some(m) => m.clone(),
            None => IntegerMatrix::zeros(self.rank((g.0 - 2, g.1)), self.rank(g)),
        }
    }

    pub fn differential_ref(&self, g: Grading) -> Option<&IntegerMatrix> {
        self.differentials.get(&g)
    }

    pub fn differentials(&self) -> &BTreeMap<Grading, IntegerMatrix> {
        &self.differentials
    }

    /// Assembles a complex from explicit bases and differentials.
    pub fn from_parts(
        crossings: usize,
        bases: BTreeMap<Grading, GradedBasis>,
        differentials: BTreeMap<Grading, IntegerMatrix>,
    ) -> Result<Self> {
        let c = BigradedComplex {
            crossings,
            bases,
            differentials,
        };
        for (g, m) in &c.differentials {
            if m.cols() != c.rank(*g) || m.rows() != c.rank((g.0 - 2, g.1)) {
                return Err(Error::DimensionMismatch(format!(
                    "differential at {g:?} is {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(c)
    }

    /// Negates one differential entry. Produces a broken complex for
    /// exercising the checks.
    pub fn negate_entry(&mut self, g: Grading, row: usize, col: usize) -> Result<()> {
        let m = self
            .differentials
            .get_mut(&g)
            .ok_or_else(|| Error::DimensionMismatch(format!("no differential at {g:?}")))?;
        if row >= m.rows() || col >= m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "entry ({row}, {col}) outside {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let v = m.get(row, col);
        m.set(row, col, -v);
        Ok(())
    }

    /// Sparse triplet dump: `# dims a b rows cols` headers followed by
    /// `a b row col value` lines.
    pub fn to_triplets(&self) -> String {
        dump_triplets(&self.differentials)
    }
}

pub fn dump_triplets(ds: &BTreeMap<Grading, IntegerMatrix>) -> String {
    let mut out = String::new();
    for ((a, b), m) in ds {
        let _ = writeln!(out, "# dims {a} {b} {} {}", m.rows(), m.cols());
        for (r, c, v) in m.triplets() {
            let _ = writeln!(out, "{a} {b} {r} {c} {v}");
        }
    }
    out
}

/// Parses the triplet dump written by [`BigradedComplex::to_triplets`].
/// Without `# dims` headers, dimensions are inferred from the entries.
pub fn parse_triplets(text: &str) -> Result<BTreeMap<Grading, IntegerMatrix>> {
    let mut dims: BTreeMap<Grading, (usize, usize)> = BTreeMap::new();
    let mut entries: BTreeMap<Grading, Vec<(usize, usize, i64)>> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let trimmed = raw.trim();
        let bad = |message: &str| Error::Syntax {
            line,
            column: 1,
            message: message.to_string(),
        };
        if let Some(rest) = trimmed.strip_prefix("# dims") {
            let v: Vec<i64> = rest
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("malformed dims header"))?;
            if v.len() != 4 || v[2] < 0 || v[3] < 0 {
                return Err(bad("dims header needs `a b rows cols`"));
            }
            dims.insert((v[0], v[1]), (v[2] as usize, v[3] as usize));
            continue;
        }
        let body = trimmed.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: Vec<i64> = body
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("expected integers `a b row col value`"))?;
        if v.len() != 5 || v[2] < 0 || v[3] < 0 {
            return Err(bad("expected `a b row col value`"));
        }
        entries
            .entry((v[0], v[1]))
            .or_default()
            .push((v[2] as usize, v[3] as usize, v[4]));
    }
    let mut keys: Vec<Grading> = dims.keys().chain(entries.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let mut out = BTreeMap::new();
    for g in keys {
        let es = entries.remove(&g).unwrap_or_default();
        let (rows, cols) = dims.get(&g).copied().unwrap_or_else(|| {
            (
                es.iter().map(|e| e.0 + 1).max().unwrap_or(0),
                es.iter().map(|e| e.1 + 1).max().unwrap_or(0),
            )
        });
        out.insert(g, IntegerMatrix::from_triplets(rows, cols, es)?);
    }
    Ok(out)
}

/// Checks `∂_{a−2,b} ∘ ∂_{a,b} = 0` for every composable pair; returns the
/// source grading of the first failure.
pub fn first_dd_failure(ds: &BTreeMap<Grading, IntegerMatrix>) -> Option<Grading> {
    let failures: Vec<Grading> = ds
        .par_iter()
        .filter_map(|(&(a, b), d1)| {
            let d2 = ds.get(&(a - 2, b))?;
            if d2.cols() != d1.rows() {
                return Some((a, b));
            }
            match d2.mul(d1) {
                Ok(p) if p.is_zero() => None,
                _ => Some((a, b)),
            }
        })
        .collect();
    failures.into_iter().min()
}

pub fn verify_dd_zero(c: &BigradedComplex) -> bool {
    first_dd_failure(&c.differentials).is_none()
}

/// Builds the chain complex of `d` with bases in enumeration order.
pub fn build_complex(d: &LinkDiagram) -> BigradedComplex {
    let resolver = Resolver::new(d);
    let n = d.crossing_count();
    let systems: Vec<(KauffmanState, CircleSystem)> = (0..1u64 << n)
        .into_par_iter()
        .map(|i| {
            let s = KauffmanState::from_lex_index(i, n);
            let cs = resolver.smooth_unchecked(&s);
            (s, cs)
        })
        .collect();

    let mut bases: BTreeMap<Grading, GradedBasis> = BTreeMap::new();
    for (s, cs) in &systems {
        for minus in sign_masks(cs.circle_count()) {
            let e = EnhancedState {
                state: *s,
                minus_mask: minus,
                circles: cs.circle_count(),
            };
            let g = e.bigrading();
            bases
                .entry(g)
                .or_insert_with(|| GradedBasis {
                    grading: g,
                    states: Vec::new(),
                })
                .states
                .push(e);
        }
    }
    let index: HashMap<(u64, u64), u32> = bases
        .values()
        .flat_map(|b| {
            b.states
                .iter()
                .enumerate()
                .map(|(i, e)| ((e.state.b_mask(), e.minus_mask), i as u32))
        })
        .collect();

    let transitions: HashMap<u64, Vec<Transition>> = systems
        .par_iter()
        .map(|(s, cs)| {
            let ts = (0..n)
                .filter(|&v| s.marker(v) == Marker::A)
                .map(|v| transition(&resolver, s, cs, v))
                .collect();
            (s.b_mask(), ts)
        })
        .collect();

    let differentials: BTreeMap<Grading, IntegerMatrix> = bases
        .par_iter()
        .map(|(&(a, b), basis)| {
            let rows = bases.get(&(a - 2, b)).map_or(0, |t| t.states.len());
            let columns: Vec<Vec<(u32, i64)>> = basis
                .states
                .iter()
                .map(|e| {
                    let mut col: Vec<(u32, i64)> = Vec::new();
                    for t in &transitions[&e.state.b_mask()] {
                        let sign = if (e.state.b_mask() >> (t.crossing + 1)).count_ones() % 2 == 0 {
                            1
                        } else {
                            -1
                        };
                        for minus in targets(t, e.minus_mask) {
                            let row = index[&(t.target.b_mask(), minus)];
                            col.push((row, sign));
                        }
                    }
                    col.sort_unstable_by_key(|x| x.0);
                    debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
                    col
                })
                .collect();
            ((a, b), IntegerMatrix::from_columns(rows, columns))
        })
        .collect();

    BigradedComplex {
        crossings: n,
        bases,
        differentials,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{framed_unknot, torus_diagram};

    fn st(markers: &str, signs: &str) -> EnhancedState {
        let m: Vec<Marker> = markers
            .chars()
            .map(|c| if c == 'A' { Marker::A } else { Marker::B })
            .collect();
        let s: Vec<bool> = signs.chars().map(|c| c == '+').collect();
        EnhancedState::new(KauffmanState::from_markers(&m), &s)
    }

    #[test]
    fn fusion_and_split_rules() {
        // Hopf: AA has 2 circles, AB has 1: fusion at crossing 1
        let hopf = torus_diagram(2).unwrap();
        assert_eq!(
            incidence(&hopf, &st("AA", "--"), &st("AB", "-")).unwrap(),
            1
        );
        assert_eq!(
            incidence(&hopf, &st("AA", "+-"), &st("AB", "+")).unwrap(),
            1
        );
        assert_eq!(
            incidence(&hopf, &st("AA", "-+"), &st("AB", "+")).unwrap(),
            1
        );
        assert_eq!(
            incidence(&hopf, &st("AA", "++"), &st("AB", "+")).unwrap(),
            0
        );
        assert_eq!(
            incidence(&hopf, &st("AA", "--"), &st("AB", "+")).unwrap(),
            0
        );
        // AB (1 circle) -> BB (2 circles): split
        assert_eq!(
            incidence(&hopf, &st("AB", "-"), &st("BB", "+-")).unwrap(),
            1
        );
        assert_eq!(
            incidence(&hopf, &st("AB", "-"), &st("BB", "-+")).unwrap(),
            1
        );
        assert_eq!(
            incidence(&hopf, &st("AB", "+"), &st("BB", "++")).unwrap(),
            1
        );
        assert_eq!(
            incidence(&hopf, &st("AB", "-"), &st("BB", "--")).unwrap(),
            0
        );
        // B -> A is never incident, nor are two switches
        assert_eq!(
            incidence(&hopf, &st("AB", "+"), &st("AA", "++")).unwrap(),
            0
        );
        assert_eq!(
            incidence(&hopf, &st("AA", "--"), &st("BB", "+-")).unwrap(),
            0
        );
        assert!(incidence(&hopf, &st("A", "--"), &st("AB", "-")).is_err());
        assert!(incidence(&hopf, &st("AA", "-"), &st("AB", "-")).is_err());
    }

    #[test]
    fn t_sign_counts_later_b_markers() {
        assert_eq!(t_sign(&st("ABB", "+"), 0).unwrap(), 2);
        assert_eq!(t_sign(&st("ABB", "+"), 2).unwrap(), 0);
        assert_eq!(t_sign(&st("AAA", "+"), 1).unwrap(), 0);
        assert!(t_sign(&st("AAA", "+"), 3).is_err());
    }

    #[test]
    fn crossingless_complex() {
        let c = build_complex(&framed_unknot(0));
        assert_eq!(c.gradings().collect::<Vec<_>>(), vec![(0, -2), (0, 2)]);
        assert!(c.differentials().values().all(IntegerMatrix::is_zero));
        assert!(verify_dd_zero(&c));
        assert!(verify_dd_zero(&build_complex(&LinkDiagram::empty())));
    }

    #[test]
    fn kink_and_hopf_sizes() {
        assert_eq!(build_complex(&torus_diagram(1).unwrap()).total_rank(), 6);
        assert_eq!(build_complex(&torus_diagram(2).unwrap()).total_rank(), 12);
    }

    /// All-pairs incidence with explicit signs, independent of the
    /// transition tables used by `build_complex`.
    fn brute_force(d: &LinkDiagram) -> BTreeMap<Grading, IntegerMatrix> {
        let c = build_complex(d);
        let mut out = BTreeMap::new();
        for (&(a, b), basis) in c.bases() {
            let targets = c
                .basis((a - 2, b))
                .map(|t| t.states.clone())
                .unwrap_or_default();
            let mut entries = Vec::new();
            for (j, s) in basis.states.iter().enumerate() {
                for (i, t) in targets.iter().enumerate() {
                    if incidence(d, s, t).unwrap() == 1 {
                        let v = (s.state.b_mask() ^ t.state.b_mask()).trailing_zeros() as usize;
                        let sign = if t_sign(s, v).unwrap() % 2 == 0 {
                            1
                        } else {
                            -1
                        };
                        entries.push((i, j, sign));
                    }
                }
            }
            out.insert(
                (a, b),
                IntegerMatrix::from_triplets(targets.len(), basis.states.len(), entries).unwrap(),
            );
        }
        out
    }

    #[test]
    fn fast_builder_matches_brute_force() {
        for d in [
            torus_diagram(1).unwrap(),
            torus_diagram(2).unwrap(),
            torus_diagram(3).unwrap(),
            framed_unknot(-2),
            crate::diagram::braid_closure(3, &[1, -2, 1, -2]).unwrap(),
        ] {
            let c = build_complex(&d);
            assert_eq!(c.differentials(), &brute_force(&d));
        }
    }

    #[test]
    fn dd_zero_and_corruption() {
        for n in 1..=6 {
            assert!(verify_dd_zero(&build_complex(&torus_diagram(n).unwrap())));
        }
        let mut c = build_complex(&torus_diagram(3).unwrap());
        // find an entry whose negation breaks ∂² = 0
        let (g, r, col) = c
            .differentials()
            .iter()
            .filter(|(g, _)| {
                c.differential_ref((g.0 - 2, g.1))
                    .is_some_and(|m| !m.is_zero())
            })
            .find_map(|(g, m)| m.triplets().next().map(|(r, col, _)| (*g, r, col)))
            .unwrap();
        c.negate_entry(g, r, col).unwrap();
        assert!(!verify_dd_zero(&c));
    }

    #[test]
    fn entries_are_units_and_preserve_b() {
        let c = build_complex(&torus_diagram(4).unwrap());
        for ((a, b), m) in c.differentials() {
            assert_eq!(m.rows(), c.rank((a - 2, *b)));
            assert!(m.triplets().all(|(_, _, v)| v == 1 || v == -1));
            for j in 0..m.cols() {
                assert!(m.column(j).len() <= 2 * c.crossing_count());
            }
        }
    }

    #[test]
    fn triplet_round_trip() {
        let c = build_complex(&torus_diagram(3).unwrap());
        let parsed = parse_triplets(&c.to_triplets()).unwrap();
        assert_eq!(&parsed, c.differentials());
        assert!(parse_triplets("1 2 3").is_err());
    }
}
