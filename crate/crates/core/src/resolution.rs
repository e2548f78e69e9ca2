//! Kauffman states, their circle systems, and enhanced states.

use std::fmt;

use crate::diagram::{ArcId, Crossing, LinkDiagram};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Marker {
    A,
    B,
}

/// An assignment of a marker to every crossing. Bit `c` of the mask is set
/// when crossing `c` carries a B marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KauffmanState {
    b_mask: u64,
    len: usize,
}

impl KauffmanState {
    pub fn all_a(len: usize) -> Self {
        KauffmanState { b_mask: 0, len }
    }

    pub fn from_markers(markers: &[Marker]) -> Self {
        let b_mask = markers
            .iter()
            .enumerate()
            .filter(|(_, m)| **m == Marker::B)
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        KauffmanState {
            b_mask,
            len: markers.len(),
        }
    }

    pub(crate) fn from_mask(b_mask: u64, len: usize) -> Self {
        KauffmanState { b_mask, len }
    }

    /// The `index`-th state in lexicographic order with `A < B`, where the
    /// first crossing is the most significant position.
    pub fn from_lex_index(index: u64, len: usize) -> Self {
        let mut b_mask = 0u64;
        for c in 0..len {
            if index >> (len - 1 - c) & 1 == 1 {
                b_mask |= 1 << c;
            }
        }
        KauffmanState { b_mask, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn b_mask(&self) -> u64 {
        self.b_mask
    }

    pub fn marker(&self, c: usize) -> Marker {
        if self.b_mask >> c & 1 == 1 {
            Marker::B
        } else {
            Marker::A
        }
    }

    pub fn markers(&self) -> Vec<Marker> {
        (0..self.len).map(|c| self.marker(c)).collect()
    }

    pub fn with_marker(&self, c: usize, m: Marker) -> Self {
        let b_mask = match m {
            Marker::A => self.b_mask & !(1 << c),
            Marker::B => self.b_mask | (1 << c),
        };
        KauffmanState { b_mask, ..*self }
    }

    pub fn b_count(&self) -> usize {
        self.b_mask.count_ones() as usize
    }

    /// σ(s) = #A − #B.
    pub fn sigma(&self) -> i64 {
        self.len as i64 - 2 * self.b_count() as i64
    }
}

impl fmt::Display for KauffmanState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in self.markers() {
            write!(f, "{}", if m == Marker::A { 'A' } else { 'B' })?;
        }
        Ok(())
    }
}

/// The circles obtained by smoothing every crossing of a diagram.
///
/// Circles are numbered by their smallest arc label; free loops come after
/// all circles that pass through crossings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleSystem {
    circle_count: usize,
    /// Circle of each arc, indexed like the resolver's sorted arc list.
    arc_circle: Vec<u8>,
    slot_circle: Vec<[u8; 4]>,
    arc_labels: Vec<ArcId>,
}

impl CircleSystem {
    pub fn circle_count(&self) -> usize {
        self.circle_count
    }

    pub fn circle_of_slot(&self, crossing: usize, slot: usize) -> usize {
        self.slot_circle[crossing][slot] as usize
    }

    pub fn circle_of_arc(&self, arc: ArcId) -> Option<usize> {
        self.arc_labels
            .binary_search(&arc)
            .ok()
            .map(|i| self.arc_circle[i] as usize)
    }

    /// Circle index of the `k`-th free loop.
    pub fn circle_of_loop(&self, k: usize) -> usize {
        self.circle_count - self.free_loop_count() + k
    }

    pub(crate) fn free_loop_count(&self) -> usize {
        let through = self
            .arc_circle
            .iter()
            .map(|&c| c as usize + 1)
            .max()
            .unwrap_or(0);
        self.circle_count - through
    }
}

/// Precomputed slot-to-arc tables for fast repeated smoothing of one diagram.
#[derive(Clone, Debug)]
pub struct Resolver {
    crossings: usize,
    free_loops: usize,
    arc_labels: Vec<ArcId>,
    slot_arc: Vec<[u32; 4]>,
}

impl Resolver {
    pub fn new(d: &LinkDiagram) -> Self {
        let arc_labels = d.arcs();
        let index = |a: ArcId| arc_labels.binary_search(&a).unwrap() as u32;
        let slot_arc = d
            .crossings()
            .iter()
            .map(|c: &Crossing| c.slots().map(index))
            .collect();
        Resolver {
            crossings: d.crossing_count(),
            free_loops: d.free_loops(),
            arc_labels,
            slot_arc,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings
    }

    pub fn smooth(&self, s: &KauffmanState) -> Result<CircleSystem> {
        if s.len() != self.crossings {
            return Err(Error::PartialState {
                expected: self.crossings,
                got: s.len(),
            });
        }
        Ok(self.smooth_unchecked(s))
    }

    pub(crate) fn smooth_unchecked(&self, s: &KauffmanState) -> CircleSystem {
        let m = self.arc_labels.len();
        let mut parent: Vec<u32> = (0..m as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for (c, slots) in self.slot_arc.iter().enumerate() {
            for (i, j) in Crossing::smoothing_pairs(s.marker(c)) {
                let (ri, rj) = (find(&mut parent, slots[i]), find(&mut parent, slots[j]));
                if ri != rj {
                    // keep the smaller index as root so roots are minimal labels
                    parent[ri.max(rj) as usize] = ri.min(rj);
                }
            }
        }
        let mut circle_of_root = vec![u8::MAX; m];
        let mut arc_circle = vec![0u8; m];
        let mut count = 0u8;
        for a in 0..m as u32 {
            let r = find(&mut parent, a) as usize;
            if circle_of_root[r] == u8::MAX {
                circle_of_root[r] = count;
                count += 1;
            }
            arc_circle[a as usize] = circle_of_root[r];
        }
        let slot_circle = self
            .slot_arc
            .iter()
            .map(|slots| slots.map(|a| arc_circle[a as usize]))
            .collect();
        CircleSystem {
            circle_count: count as usize + self.free_loops,
            arc_circle,
            slot_circle,
            arc_labels: self.arc_labels.clone(),
        }
    }
}

/// Circle system of `d` under the state `s`.
pub fn smooth(d: &LinkDiagram, s: &KauffmanState) -> Result<CircleSystem> {
    Resolver::new(d).smooth(s)
}

/// All `2^|cr(d)|` Kauffman states, lexicographic in crossing order with
/// `A < B`.
pub fn enumerate_states(d: &LinkDiagram) -> impl Iterator<Item = KauffmanState> {
    let n = d.crossing_count();
    (0..1u64 << n).map(move |i| KauffmanState::from_lex_index(i, n))
}

/// A Kauffman state with a sign on every circle. Bit `j` of `minus_mask` is
/// set when circle `j` carries a minus sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnhancedState {
    pub state: KauffmanState,
    pub minus_mask: u64,
    pub circles: usize,
}

impl EnhancedState {
    pub fn new(state: KauffmanState, signs: &[bool]) -> Self {
        let minus_mask = signs
            .iter()
            .enumerate()
            .filter(|(_, plus)| !**plus)
            .fold(0, |acc, (j, _)| acc | (1u64 << j));
        EnhancedState {
            state,
            minus_mask,
            circles: signs.len(),
        }
    }

    /// Sign of circle `j`, `true` for plus.
    pub fn sign(&self, j: usize) -> bool {
        self.minus_mask >> j & 1 == 0
    }

    pub fn signs(&self) -> Vec<bool> {
        (0..self.circles).map(|j| self.sign(j)).collect()
    }

    pub fn sigma(&self) -> i64 {
        self.state.sigma()
    }

    /// τ(S) = #plus circles − #minus circles.
    pub fn tau(&self) -> i64 {
        self.circles as i64 - 2 * self.minus_mask.count_ones() as i64
    }

    /// `(a, b) = (σ, σ + 2τ)`.
    pub fn bigrading(&self) -> (i64, i64) {
        let sigma = self.sigma();
        (sigma, sigma + 2 * self.tau())
    }
}

pub fn bigrading(s: &EnhancedState) -> (i64, i64) {
    s.bigrading()
}

/// Minus-masks of all `2^circles` sign vectors, lexicographic with `+ < −`
/// and circle 0 most significant.
pub(crate) fn sign_masks(circles: usize) -> impl Iterator<Item = u64> {
    (0..1u64 << circles).map(move |i| {
        let mut mask = 0u64;
        for j in 0..circles {
            if i >> (circles - 1 - j) & 1 == 1 {
                mask |= 1 << j;
            }
        }
        mask
    })
}

/// Streams every enhanced state of `d` with its bigrading: states in
/// lexicographic order, then sign vectors lexicographic with `+ < −`.
pub fn enumerate_enhanced(d: &LinkDiagram) -> impl Iterator<Item = (EnhancedState, i64, i64)> + '_ {
    let resolver = Resolver::new(d);
    enumerate_states(d).flat_map(move |s| {
        let circles = resolver.smooth_unchecked(&s).circle_count();
        sign_masks(circles).map(move |minus_mask| {
            let e = EnhancedState {
                state: s,
                minus_mask,
                circles,
            };
            let (a, b) = e.bigrading();
            (e, a, b)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{framed_unknot, torus_diagram};

    fn state(s: &str) -> KauffmanState {
        KauffmanState::from_markers(
            &s.chars()
                .map(|c| if c == 'A' { Marker::A } else { Marker::B })
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn hopf_circle_counts() {
        let hopf = torus_diagram(2).unwrap();
        let counts: Vec<usize> = ["AA", "AB", "BA", "BB"]
            .iter()
            .map(|s| smooth(&hopf, &state(s)).unwrap().circle_count())
            .collect();
        assert_eq!(counts, vec![2, 1, 1, 2]);
    }

    #[test]
    fn free_loop_smoothing() {
        let cs = smooth(&framed_unknot(0), &KauffmanState::all_a(0)).unwrap();
        assert_eq!(cs.circle_count(), 1);
        assert_eq!(cs.circle_of_loop(0), 0);
    }

    #[test]
    fn partial_state_rejected() {
        let hopf = torus_diagram(2).unwrap();
        assert_eq!(
            smooth(&hopf, &state("A")),
            Err(Error::PartialState {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn state_order() {
        let hopf = torus_diagram(2).unwrap();
        let names: Vec<String> = enumerate_states(&hopf).map(|s| s.to_string()).collect();
        assert_eq!(names, vec!["AA", "AB", "BA", "BB"]);
        assert_eq!(enumerate_states(&LinkDiagram::empty()).count(), 1);
        assert_eq!(enumerate_states(&torus_diagram(12).unwrap()).count(), 4096);
    }

    #[test]
    fn enhanced_counts() {
        let u: Vec<_> = enumerate_enhanced(&framed_unknot(0)).collect();
        assert_eq!(u.len(), 2);
        assert_eq!((u[0].1, u[0].2), (0, 2));
        assert_eq!((u[1].1, u[1].2), (0, -2));
        assert_eq!(enumerate_enhanced(&torus_diagram(2).unwrap()).count(), 12);
        assert_eq!(enumerate_enhanced(&torus_diagram(1).unwrap()).count(), 6);
    }

    #[test]
    fn bigrading_examples() {
        let e = EnhancedState::new(state("AAA"), &[true, true]);
        assert_eq!(bigrading(&e), (3, 7));
        let e = EnhancedState::new(state("AA"), &[false, false]);
        assert_eq!(e.bigrading(), (2, -2));
        let e = EnhancedState::new(state("AB"), &[true, false]);
        assert_eq!(e.bigrading(), (0, 0));
    }

    #[test]
    fn circle_ids_follow_min_arc_label() {
        let t3 = torus_diagram(3).unwrap();
        let cs = smooth(&t3, &KauffmanState::all_a(3)).unwrap();
        assert_eq!(cs.circle_of_arc(ArcId(1)), Some(0));
        for c in 0..3 {
            for s in 0..4 {
                assert!(cs.circle_of_slot(c, s) < cs.circle_count());
            }
        }
    }
}
