//! Homology groups of the bigraded complex, grading conventions, table
//! comparison, and rendering.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::{first_dd_failure, BigradedComplex, Grading};
use crate::error::{Error, Result};
use crate::linalg::invariant_factors;
use crate::poly::LaurentPoly;

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// `ℤ/n`; `ℤ` for `n = 0` and trivial for `n = 1`.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::trivial(),
            n => AbelianGroup {
                free_rank: 0,
                torsion: vec![n],
            },
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, with torsion brought back to invariant-factor form.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut primes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &d in self.torsion.iter().chain(&other.torsion) {
            for (p, e) in factor(d) {
                primes.entry(p).or_default().push(p.pow(e));
            }
        }
        // The i-th largest prime powers of every prime multiply to the
        // i-th largest invariant factor.
        let len = primes.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for powers in primes.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.iter().enumerate() {
                torsion[len - 1 - i] *= q;
            }
        }
        AbelianGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion,
        }
    }
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Z`, `Z^2`, `Z_2`, `Z^2+Z_2+Z_4`; `0` for the trivial group.
impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Keys are `(a, b)`.
    Framed,
    /// Keys are `(i, j)` for an orientation of the given writhe.
    Classical { writhe: i64 },
}

/// Groups keyed by bigrading; absent keys are trivial groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    convention: Convention,
    groups: BTreeMap<Grading, AbelianGroup>,
}

impl HomologyTable {
    pub fn new(convention: Convention) -> Self {
        HomologyTable {
            convention,
            groups: BTreeMap::new(),
        }
    }

    pub fn framed() -> Self {
        Self::new(Convention::Framed)
    }

    /// Builds a framed table from `(a, b, group)` entries.
    pub fn from_entries<I: IntoIterator<Item = (i64, i64, AbelianGroup)>>(entries: I) -> Self {
        let mut t = Self::framed();
        for (a, b, g) in entries {
            t.insert((a, b), g);
        }
        t
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Stores `g` at `key`; trivial groups are dropped.
    pub fn insert(&mut self, key: Grading, g: AbelianGroup) {
        if g.is_trivial() {
            self.groups.remove(&key);
        } else {
            self.groups.insert(key, g);
        }
    }

    pub fn get(&self, key: Grading) -> AbelianGroup {
        self.groups.get(&key).cloned().unwrap_or_default()
    }

    pub fn groups(&self) -> &BTreeMap<Grading, AbelianGroup> {
        &self.groups
    }

    /// Number of nontrivial groups.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Keys moved by `(da, db)`.
    pub fn shifted(&self, da: i64, db: i64) -> HomologyTable {
        HomologyTable {
            convention: self.convention,
            groups: self
                .groups
                .iter()
                .map(|(&(a, b), g)| ((a + da, b + db), g.clone()))
                .collect(),
        }
    }

    /// Keywise direct sum of two tables in the same convention.
    pub fn direct_sum(&self, other: &HomologyTable) -> HomologyTable {
        let mut out = self.clone();
        for (&k, g) in &other.groups {
            let sum = out.get(k).direct_sum(g);
            out.insert(k, sum);
        }
        out
    }

    /// `Σ (−1)^{(b−a)/2} rank H_{a,b} A^b` for a framed table.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&(a, b), g) in &self.groups {
            let sign = if (b - a).rem_euclid(4) == 0 { 1 } else { -1 };
            p.add_term(b, BigInt::from(sign * g.free_rank as i64));
        }
        p
    }

    /// Rows `b` descending, columns `a` ascending, as in printed tables.
    pub fn render_table(&self) -> String {
        let (row_name, col_name, step) = match self.convention {
            Convention::Framed => ("b", "a", 2),
            Convention::Classical { .. } => ("j", "i", 1),
        };
        if self.groups.is_empty() {
            return format!("{row_name} | {col_name}\n(all groups trivial)\n");
        }
        let cols: Vec<i64> = {
            let lo = self.groups.keys().map(|k| k.0).min().unwrap();
            let hi = self.groups.keys().map(|k| k.0).max().unwrap();
            (lo..=hi).step_by(step).collect()
        };
        let rows: Vec<i64> = {
            let lo = self.groups.keys().map(|k| k.1).min().unwrap();
            let hi = self.groups.keys().map(|k| k.1).max().unwrap();
            let mut r: Vec<i64> = (lo..=hi).step_by(step).collect();
            r.reverse();
            r
        };
        let cell = |r: i64, c: i64| {
            self.groups
                .get(&(c, r))
                .map(|g| g.to_string())
                .unwrap_or_default()
        };
        let header = format!("{row_name} | {col_name}");
        let first = rows
            .iter()
            .map(|r| r.to_string().len())
            .chain([header.len()])
            .max()
            .unwrap();
        let widths: Vec<usize> = cols
            .iter()
            .map(|&c| {
                rows.iter()
                    .map(|&r| cell(r, c).len())
                    .chain([c.to_string().len()])
                    .max()
                    .unwrap()
            })
            .collect();
        let mut out = String::new();
        let mut line = format!("{header:>first$} ||");
        for (c, w) in cols.iter().zip(&widths) {
            line.push_str(&format!(" {:>w$} |", c.to_string()));
        }
        out.push_str(line.trim_end());
        out.push('\n');
        out.push_str(&"=".repeat(line.trim_end().len()));
        out.push('\n');
        for &r in &rows {
            let mut line = format!("{:>first$} ||", r.to_string());
            for (&c, w) in cols.iter().zip(&widths) {
                line.push_str(&format!(" {:>w$} |", cell(r, c)));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    fn key_names(&self) -> (&'static str, &'static str) {
        match self.convention {
            Convention::Framed => ("a", "b"),
            Convention::Classical { .. } => ("i", "j"),
        }
    }

    /// Entries ordered like the table: second index descending, then first
    /// index ascending.
    fn ordered(&self) -> Vec<(Grading, &AbelianGroup)> {
        let mut v: Vec<(Grading, &AbelianGroup)> =
            self.groups.iter().map(|(k, g)| (*k, g)).collect();
        v.sort_by_key(|((a, b), _)| (-b, *a));
        v
    }

    pub fn to_json(&self) -> Value {
        let (x, y) = self.key_names();
        Value::Array(
            self.ordered()
                .into_iter()
                .map(|((a, b), g)| {
                    json!({ x: a, y: b, "free_rank": g.free_rank, "torsion": g.torsion })
                })
                .collect(),
        )
    }

    pub fn render_json(&self) -> String {
        self.to_json().to_string()
    }

    pub fn render_csv(&self) -> String {
        let (x, y) = self.key_names();
        let mut out = format!("{x},{y},free_rank,torsion\n");
        for ((a, b), g) in self.ordered() {
            let torsion: Vec<String> = g.torsion.iter().map(u64::to_string).collect();
            out.push_str(&format!("{a},{b},{},{}\n", g.free_rank, torsion.join(";")));
        }
        out
    }
}

fn to_u64(d: &BigInt) -> Result<u64> {
    d.to_u64()
        .ok_or_else(|| Error::Internal(format!("invariant factor {d} exceeds 64 bits")))
}

/// `H_{a,b} = ker ∂_{a,b} / im ∂_{a+2,b}` for every grading of `c`.
pub fn compute_homology(c: &BigradedComplex) -> Result<HomologyTable> {
    if let Some((a, b)) = first_dd_failure(c.differentials()) {
        return Err(Error::NotAComplex { a, b });
    }
    let factors: BTreeMap<Grading, Vec<BigInt>> = c
        .differentials()
        .par_iter()
        .map(|(&g, m)| (g, invariant_factors(m)))
        .collect();
    let mut table = HomologyTable::framed();
    for (a, b) in c.gradings() {
        let out_rank = factors.get(&(a, b)).map_or(0, Vec::len);
        let incoming = factors.get(&(a + 2, b)).map(Vec::as_slice).unwrap_or(&[]);
        let free_rank = c.rank((a, b)) - out_rank - incoming.len();
        let torsion = incoming
            .iter()
            .filter(|d| !d.is_one())
            .map(to_u64)
            .collect::<Result<Vec<u64>>>()?;
        table.insert((a, b), AbelianGroup { free_rank, torsion });
    }
    Ok(table)
}

/// Relabels a framed table by `𝓗^{i,j} = H_{w−2i, 3w−2j}`.
pub fn classical_table(t: &HomologyTable, w: i64) -> Result<HomologyTable> {
    if t.convention != Convention::Framed {
        return Err(Error::Internal(
            "classical conversion needs a framed table".into(),
        ));
    }
    let mut out = HomologyTable::new(Convention::Classical { writhe: w });
    for (&(a, b), g) in &t.groups {
        if (w - a) % 2 != 0 || (3 * w - b) % 2 != 0 {
            return Err(Error::Parity { a, b, w });
        }
        out.insert(((w - a) / 2, (3 * w - b) / 2), g.clone());
    }
    Ok(out)
}

pub fn tables_equal(t1: &HomologyTable, t2: &HomologyTable) -> bool {
    t1 == t2
}

/// Whether `t1` is `t2` with every key moved by `(da, db)`.
pub fn tables_shifted(t1: &HomologyTable, t2: &HomologyTable, da: i64, db: i64) -> bool {
    *t1 == t2.shifted(da, db)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::bracket_state_sum;
    use crate::complex::build_complex;
    use crate::diagram::{framed_unknot, torus_diagram, LinkDiagram};

    fn z() -> AbelianGroup {
        AbelianGroup::free(1)
    }

    #[test]
    fn group_display() {
        assert_eq!(z().to_string(), "Z");
        assert_eq!(AbelianGroup::free(2).to_string(), "Z^2");
        assert_eq!(AbelianGroup::cyclic(2).to_string(), "Z_2");
        assert_eq!(
            z().direct_sum(&AbelianGroup::cyclic(2)).to_string(),
            "Z+Z_2"
        );
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        let g = AbelianGroup::cyclic(2).direct_sum(&AbelianGroup::cyclic(3));
        assert_eq!(g.torsion, vec![6]);
        let g = AbelianGroup::cyclic(4).direct_sum(&AbelianGroup::cyclic(6));
        assert_eq!(g.torsion, vec![2, 12]);
    }

    #[test]
    fn unknot_and_hopf() {
        let t = compute_homology(&build_complex(&framed_unknot(0))).unwrap();
        assert_eq!(t, HomologyTable::from_entries([(0, 2, z()), (0, -2, z())]));
        let hopf = compute_homology(&build_complex(&torus_diagram(2).unwrap())).unwrap();
        let expected =
            HomologyTable::from_entries([(2, 6, z()), (2, 2, z()), (-2, -2, z()), (-2, -6, z())]);
        assert_eq!(hopf, expected);
        assert_eq!(
            compute_homology(&build_complex(&LinkDiagram::empty()))
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn trefoil_has_two_torsion() {
        let t = compute_homology(&build_complex(&torus_diagram(3).unwrap())).unwrap();
        let expected = HomologyTable::from_entries([
            (3, 7, z()),
            (3, 3, z()),
            (-1, -1, z()),
            (-3, -9, z()),
            (-3, -5, AbelianGroup::cyclic(2)),
        ]);
        assert_eq!(t, expected);
        let c = classical_table(&t, 3).unwrap();
        assert_eq!(c.get((0, 1)), z());
        assert_eq!(c.get((3, 7)), AbelianGroup::cyclic(2));
        assert!(classical_table(&t, 2).is_err());
    }

    #[test]
    fn euler_matches_bracket() {
        for n in 1..=5 {
            let d = torus_diagram(n).unwrap();
            let t = compute_homology(&build_complex(&d)).unwrap();
            assert_eq!(t.euler_characteristic(), bracket_state_sum(&d));
        }
    }

    #[test]
    fn broken_complex_is_rejected() {
        let mut c = build_complex(&torus_diagram(3).unwrap());
        let g = (1, 3);
        let (r, col, _) = c.differential_ref(g).unwrap().triplets().next().unwrap();
        c.negate_entry(g, r, col).unwrap();
        assert!(matches!(
            compute_homology(&c),
            Err(Error::NotAComplex { .. })
        ));
    }

    #[test]
    fn renderers() {
        let t = HomologyTable::from_entries([(0, 2, z()), (0, -2, z())]);
        assert_eq!(
            t.render_json(),
            r#"[{"a":0,"b":2,"free_rank":1,"torsion":[]},{"a":0,"b":-2,"free_rank":1,"torsion":[]}]"#
        );
        assert_eq!(t.render_csv(), "a,b,free_rank,torsion\n0,2,1,\n0,-2,1,\n");
        let table = t.render_table();
        assert!(table.lines().next().unwrap().starts_with("b | a ||"));
        assert_eq!(table.lines().count(), 2 + 3);
        let m = HomologyTable::from_entries([(
            1,
            1,
            AbelianGroup {
                free_rank: 2,
                torsion: vec![2, 4],
            },
        )]);
        assert_eq!(m.render_csv().lines().nth(1), Some("1,1,2,2;4"));
        assert!(m.render_table().contains("Z^2+Z_2+Z_4"));
    }

    #[test]
    fn shifts_and_sums() {
        let t = HomologyTable::from_entries([(0, 2, z())]);
        assert!(tables_shifted(&t.shifted(1, 3), &t, 1, 3));
        assert!(!tables_equal(&t.shifted(1, 3), &t));
        let s = t.direct_sum(&t);
        assert_eq!(s.get((0, 2)), AbelianGroup::free(2));
    }
}
