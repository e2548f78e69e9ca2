//! Unoriented link diagrams in planar-diagram (PD) form.
//!
//! A crossing lists the four arcs meeting at it counterclockwise, starting at
//! the incoming under-strand. The under-strand occupies slots 1 and 3, the
//! over-strand slots 2 and 4. Crossingless circle components are kept as a
//! counter rather than as arcs so the 0-crossing unknot is representable.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::resolution::Marker;

/// Crossing count above which state enumeration no longer fits the
/// bitmask encodings used downstream.
pub const MAX_CROSSINGS: usize = 32;

/// Upper bound on `2 * crossings + free_loops`, which bounds the number of
/// circles of any smoothing.
pub const MAX_CIRCLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub u32);

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    slots: [ArcId; 4],
}

impl Crossing {
    pub fn new(slots: [u32; 4]) -> Self {
        Crossing {
            slots: slots.map(ArcId),
        }
    }

    pub fn slots(&self) -> [ArcId; 4] {
        self.slots
    }

    /// Arc at a 0-based slot position.
    pub fn slot(&self, i: usize) -> ArcId {
        self.slots[i]
    }

    /// The same crossing with the other strand on top.
    pub fn flipped(&self) -> Crossing {
        let [a, b, c, d] = self.slots;
        Crossing {
            slots: [b, c, d, a],
        }
    }

    /// Slot pairs joined by smoothing this crossing with `marker`.
    pub fn smoothing_pairs(marker: Marker) -> [(usize, usize); 2] {
        match marker {
            Marker::A => [(0, 1), (2, 3)],
            Marker::B => [(0, 3), (1, 2)],
        }
    }
}

/// Where an arc of a diagram ends up after smoothing one crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoothedArc {
    Arc(ArcId),
    /// Index into the free loops of the smoothed diagram.
    Loop(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
}

/// Position of one end of an arc: (crossing index, 0-based slot).
pub type SlotRef = (usize, usize);

impl LinkDiagram {
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self> {
        if crossings.len() > MAX_CROSSINGS {
            return Err(Error::TooLarge(format!(
                "{} crossings (limit {MAX_CROSSINGS})",
                crossings.len()
            )));
        }
        if 2 * crossings.len() + free_loops > MAX_CIRCLES {
            return Err(Error::TooLarge(format!(
                "{} crossings with {free_loops} free loops",
                crossings.len()
            )));
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for c in &crossings {
            for a in c.slots {
                if a.0 == 0 {
                    return Err(Error::NonPositiveArc { line: 0, column: 0 });
                }
                *counts.entry(a.0).or_default() += 1;
            }
        }
        if let Some((&arc, &count)) = counts.iter().find(|(_, &n)| n != 2) {
            return Err(Error::ArcIncidence { arc, count });
        }
        Ok(LinkDiagram {
            crossings,
            free_loops,
        })
    }

    pub fn empty() -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            free_loops: 0,
        }
    }

    /// `k` disjoint crossingless circles.
    pub fn unlink(k: usize) -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            free_loops: k,
        }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty() && self.free_loops == 0
    }

    /// All arc labels in increasing order.
    pub fn arcs(&self) -> Vec<ArcId> {
        let mut arcs: Vec<ArcId> = self.crossings.iter().flat_map(|c| c.slots).collect();
        arcs.sort_unstable();
        arcs.dedup();
        arcs
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn max_arc(&self) -> u32 {
        self.crossings
            .iter()
            .flat_map(|c| c.slots)
            .map(|a| a.0)
            .max()
            .unwrap_or(0)
    }

    /// Both ends of every arc, in (crossing, slot) scan order.
    pub fn arc_ends(&self) -> BTreeMap<ArcId, [SlotRef; 2]> {
        let mut ends: BTreeMap<ArcId, Vec<SlotRef>> = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            for (si, a) in c.slots.iter().enumerate() {
                ends.entry(*a).or_default().push((ci, si));
            }
        }
        ends.into_iter().map(|(a, v)| (a, [v[0], v[1]])).collect()
    }

    pub fn check_crossing(&self, v: usize) -> Result<()> {
        if v >= self.crossings.len() {
            return Err(Error::InvalidCrossing {
                index: v,
                count: self.crossings.len(),
            });
        }
        Ok(())
    }

    /// Reorders crossings so that new crossing `i` is old crossing `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> Result<LinkDiagram> {
        let n = self.crossings.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::Ordering(format!(
                "expected {n} indices, got {}",
                order.len()
            )));
        }
        for &i in order {
            if i >= n || seen[i] {
                return Err(Error::Ordering(format!("{order:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(LinkDiagram {
            crossings: order.iter().map(|&i| self.crossings[i]).collect(),
            free_loops: self.free_loops,
        })
    }

    /// Mirror image: every crossing changes which strand is on top.
    pub fn mirror(&self) -> LinkDiagram {
        LinkDiagram {
            crossings: self.crossings.iter().map(Crossing::flipped).collect(),
            free_loops: self.free_loops,
        }
    }

    /// Disjoint union, with `other`'s arcs relabeled past ours and its
    /// crossings appended after ours.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> Result<LinkDiagram> {
        let offset = self.max_arc();
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| Crossing {
            slots: c.slots.map(|a| ArcId(a.0 + offset)),
        }));
        LinkDiagram::new(crossings, self.free_loops + other.free_loops)
    }

    pub fn with_free_loops(&self, extra: usize) -> Result<LinkDiagram> {
        LinkDiagram::new(self.crossings.clone(), self.free_loops + extra)
    }

    /// Relabels arcs 1, 2, ... in order of first appearance when scanning
    /// crossings in order and slots in order. Two diagrams that differ only
    /// by arc labels have equal canonical forms.
    pub fn canonical_form(&self) -> LinkDiagram {
        let mut relabel: HashMap<ArcId, u32> = HashMap::new();
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing {
                slots: c.slots.map(|a| {
                    let next = relabel.len() as u32 + 1;
                    ArcId(*relabel.entry(a).or_insert(next))
                }),
            })
            .collect();
        LinkDiagram {
            crossings,
            free_loops: self.free_loops,
        }
    }

    /// Smooths crossing `v` with the given marker, producing a diagram with
    /// one fewer crossing. Arcs joined through the smoothing take the
    /// smallest label among them; a joined strand that closes up without
    /// crossings becomes a new free loop. Crossings after `v` shift down by
    /// one. The returned map sends every arc of `self` to its image.
    pub fn smooth_crossing(
        &self,
        v: usize,
        marker: Marker,
    ) -> Result<(LinkDiagram, BTreeMap<ArcId, SmoothedArc>)> {
        self.check_crossing(v)?;
        let slots = self.crossings[v].slots;
        let local: Vec<ArcId> = {
            let mut l = slots.to_vec();
            l.sort_unstable();
            l.dedup();
            l
        };
        let pos = |a: ArcId| local.iter().position(|&x| x == a).unwrap();
        let mut parent: Vec<usize> = (0..local.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, j) in Crossing::smoothing_pairs(marker) {
            let (ri, rj) = (
                find(&mut parent, pos(slots[i])),
                find(&mut parent, pos(slots[j])),
            );
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        // Occurrences each local arc keeps outside crossing v.
        let mut remaining = vec![2usize; local.len()];
        for a in slots {
            remaining[pos(a)] -= 1;
        }
        let mut group_remaining: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..local.len() {
            let r = find(&mut parent, i);
            *group_remaining.entry(r).or_default() += remaining[i];
        }

        let mut free_loops = self.free_loops;
        let mut map: BTreeMap<ArcId, SmoothedArc> = BTreeMap::new();
        let mut loop_of_group: BTreeMap<usize, usize> = BTreeMap::new();
        for (&root, &rem) in &group_remaining {
            if rem == 0 {
                loop_of_group.insert(root, free_loops);
                free_loops += 1;
            }
        }
        for arc in self.arcs() {
            let image = match local.iter().position(|&x| x == arc) {
                None => SmoothedArc::Arc(arc),
                Some(i) => {
                    let root = find(&mut parent, i);
                    match loop_of_group.get(&root) {
                        Some(&l) => SmoothedArc::Loop(l),
                        // Groups are unioned toward the smaller index, and
                        // `local` is sorted, so the root carries the minimum label.
                        None => SmoothedArc::Arc(local[root]),
                    }
                }
            };
            map.insert(arc, image);
        }
        let crossings = self
            .crossings
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != v)
            .map(|(_, c)| Crossing {
                slots: c.slots.map(|a| match map[&a] {
                    SmoothedArc::Arc(b) => b,
                    SmoothedArc::Loop(_) => unreachable!("looped arcs only meet crossing v"),
                }),
            })
            .collect();
        Ok((LinkDiagram::new(crossings, free_loops)?, map))
    }
}

/// Which strand an R1 kink is inserted on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum R1Site {
    Arc(ArcId),
    FreeLoop,
}

/// Inserts one Reidemeister-I kink of the given sign (`+1` or `-1`). The new
/// crossing is appended last in the crossing order.
pub fn apply_r1(d: &LinkDiagram, site: R1Site, sign: i32) -> Result<LinkDiagram> {
    let positive = match sign {
        1 => true,
        -1 => false,
        s => {
            return Err(Error::Orientation(format!(
                "kink sign must be +1 or -1, got {s}"
            )))
        }
    };
    let next = d.max_arc() + 1;
    let mut crossings = d.crossings.clone();
    let mut free_loops = d.free_loops;
    let (through_a, through_b, lp) = match site {
        R1Site::FreeLoop => {
            if free_loops == 0 {
                return Err(Error::Internal("diagram has no free loop".into()));
            }
            free_loops -= 1;
            (ArcId(next), ArcId(next), ArcId(next + 1))
        }
        R1Site::Arc(arc) => {
            let ends = d.arc_ends();
            let [_, (c2, s2)] = *ends.get(&arc).ok_or(Error::UnknownArc(arc.0))?;
            let split = ArcId(next);
            crossings[c2].slots[s2] = split;
            (arc, split, ArcId(next + 1))
        }
    };
    // Positive kink: the loop joins slots 1-2 and the A-smoothing splits it
    // off. Negative kink: the loop joins slots 2-3.
    let kink = if positive {
        [lp, lp, through_b, through_a]
    } else {
        [through_a, lp, lp, through_b]
    };
    crossings.push(Crossing { slots: kink });
    LinkDiagram::new(crossings, free_loops)
}

/// Closure of a braid word on `strands` strands. Generator `i` (1-based)
/// is a positive crossing of strands `i` and `i + 1`; `-i` is its inverse.
/// Strands not touched by any generator close up into free loops.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<LinkDiagram> {
    if strands == 0 {
        return Err(Error::TorusParameter { min: 1, got: 0 });
    }
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if i == 0 || i >= strands {
            return Err(Error::Internal(format!(
                "generator {g} is invalid on {strands} strands"
            )));
        }
    }
    let mut current: Vec<u32> = (1..=strands as u32).collect();
    let mut next = strands as u32 + 1;
    let mut crossings: Vec<[u32; 4]> = Vec::with_capacity(word.len());
    for &g in word {
        let left = g.unsigned_abs() as usize - 1;
        let right = left + 1;
        let (l_in, r_in) = (current[left], current[right]);
        let (l_out, r_out) = (next, next + 1);
        next += 2;
        crossings.push(if g > 0 {
            // over strand runs bottom-left to top-right
            [r_in, r_out, l_out, l_in]
        } else {
            [l_in, r_in, r_out, l_out]
        });
        current[left] = l_out;
        current[right] = r_out;
    }
    // Close the braid: the top arc at each position is the bottom one.
    let mut alias: HashMap<u32, u32> = HashMap::new();
    let mut free_loops = 0;
    for (pos, &top) in current.iter().enumerate() {
        let bottom = pos as u32 + 1;
        if top == bottom {
            free_loops += 1;
        } else {
            alias.insert(top, bottom);
        }
    }
    let resolved: Vec<[u32; 4]> = crossings
        .iter()
        .map(|c| c.map(|a| *alias.get(&a).unwrap_or(&a)))
        .collect();
    // Compact labels to 1..=2k preserving their relative order.
    let mut labels: Vec<u32> = resolved.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let compact: HashMap<u32, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as u32 + 1))
        .collect();
    LinkDiagram::new(
        resolved
            .iter()
            .map(|c| Crossing::new(c.map(|a| compact[&a])))
            .collect(),
        free_loops,
    )
}

/// Closure of the two-strand braid with `n` positive crossings, in braid
/// order. For `n = 1` this is a one-kink unknot.
pub fn torus_diagram(n: i64) -> Result<LinkDiagram> {
    if n < 1 {
        return Err(Error::TorusParameter { min: 1, got: n });
    }
    braid_closure(2, &vec![1; n as usize])
}

/// Unknot with `|k|` kinks of sign `k`.
pub fn framed_unknot(k: i64) -> LinkDiagram {
    let mut d = LinkDiagram::unlink(1);
    let sign = if k >= 0 { 1 } else { -1 };
    for i in 0..k.unsigned_abs() {
        let site = if i == 0 {
            R1Site::FreeLoop
        } else {
            R1Site::Arc(ArcId(1))
        };
        d = apply_r1(&d, site, sign).expect("kinks on an unknot are always valid");
    }
    d
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into whitespace-separated tokens with 1-based columns,
/// dropping everything after `#`.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((body[..s].chars().count() + 1, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((body[..s].chars().count() + 1, &body[s..]));
    }
    out
}

fn parse_int(line: usize, (column, tok): (usize, &str)) -> Result<i64> {
    tok.parse::<i64>()
        .map_err(|_| syntax(line, column, format!("expected an integer, found `{tok}`")))
}

/// Parses the PD text format: `X a b c d` crossing lines, `L k` free-loop
/// lines, `#` comments and blank lines.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let mut crossings = Vec::new();
    let mut free_loops = 0usize;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        match head {
            "X" => {
                if toks.len() != 5 {
                    return Err(syntax(
                        line,
                        col,
                        format!("crossing needs 4 arc labels, found {}", toks.len() - 1),
                    ));
                }
                let mut slots = [0u32; 4];
                for (k, &t) in toks[1..].iter().enumerate() {
                    let v = parse_int(line, t)?;
                    if v <= 0 {
                        return Err(Error::NonPositiveArc { line, column: t.0 });
                    }
                    slots[k] =
                        u32::try_from(v).map_err(|_| syntax(line, t.0, "arc label too large"))?;
                }
                crossings.push(Crossing::new(slots));
            }
            "L" => {
                if toks.len() != 2 {
                    return Err(syntax(line, col, "`L` takes exactly one count"));
                }
                let k = parse_int(line, toks[1])?;
                if k < 0 {
                    return Err(syntax(line, toks[1].0, "free loop count must be >= 0"));
                }
                free_loops += k as usize;
            }
            other => {
                return Err(syntax(
                    line,
                    col,
                    format!("unknown directive `{other}` (expected X or L)"),
                ))
            }
        }
    }
    LinkDiagram::new(crossings, free_loops)
}

/// Renders a diagram in the PD text format accepted by [`parse_pd`].
pub fn emit_pd(d: &LinkDiagram) -> String {
    let mut out = String::new();
    for c in &d.crossings {
        let [a, b, x, y] = c.slots;
        out.push_str(&format!("X {a} {b} {x} {y}\n"));
    }
    if d.free_loops > 0 {
        out.push_str(&format!("L {}\n", d.free_loops));
    }
    out
}

/// A link diagram together with a direction on every arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedDiagram {
    base: LinkDiagram,
    /// `true`: the arc runs from its first end (in scan order) to its second.
    forward: BTreeMap<ArcId, bool>,
}

impl OrientedDiagram {
    pub fn new(base: LinkDiagram, forward: BTreeMap<ArcId, bool>) -> Result<Self> {
        let arcs = base.arcs();
        for a in &arcs {
            if !forward.contains_key(a) {
                return Err(Error::Orientation(format!("arc {a} has no direction")));
            }
        }
        if let Some(a) = forward.keys().find(|a| arcs.binary_search(a).is_err()) {
            return Err(Error::UnknownArc(a.0));
        }
        let od = OrientedDiagram { base, forward };
        for v in 0..od.base.crossing_count() {
            od.strand_directions(v)?;
        }
        Ok(od)
    }

    /// Orientation implied by the PD convention that slot 1 is the incoming
    /// under-strand. Each component is seeded at its first under-crossing in
    /// crossing order and oriented by walking along it; components that never
    /// pass under a crossing follow their first arc's scan order.
    pub fn from_pd(base: LinkDiagram) -> Result<Self> {
        let ends = base.arc_ends();
        // head of each oriented arc: the end where it enters a crossing
        let mut head: BTreeMap<ArcId, SlotRef> = BTreeMap::new();
        let walk = |head: &mut BTreeMap<ArcId, SlotRef>, arc: ArcId, at: SlotRef| {
            let (mut arc, mut at) = (arc, at);
            while !head.contains_key(&arc) {
                head.insert(arc, at);
                let (c, s) = at;
                let out = (c, (s + 2) % 4);
                arc = base.crossings[c].slots[out.1];
                let [e0, e1] = ends[&arc];
                at = if e0 == out { e1 } else { e0 };
            }
        };
        for (ci, c) in base.crossings.iter().enumerate() {
            walk(&mut head, c.slots[0], (ci, 0));
        }
        for arc in base.arcs() {
            walk(&mut head, arc, ends[&arc][1]);
        }
        let forward = head
            .iter()
            .map(|(arc, h)| (*arc, ends[arc][1] == *h))
            .collect();
        OrientedDiagram::new(base, forward)
    }

    pub fn base(&self) -> &LinkDiagram {
        &self.base
    }

    pub fn directions(&self) -> &BTreeMap<ArcId, bool> {
        &self.forward
    }

    fn head(&self, arc: ArcId, ends: &BTreeMap<ArcId, [SlotRef; 2]>) -> SlotRef {
        let [first, second] = ends[&arc];
        if self.forward[&arc] {
            second
        } else {
            first
        }
    }

    /// For crossing `v`: whether the under-strand runs slot 1 -> 3 and
    /// whether the over-strand runs slot 4 -> 2.
    fn strand_directions(&self, v: usize) -> Result<(bool, bool)> {
        let ends = self.base.arc_ends();
        let c = self.base.crossings[v];
        let enters = |s: usize| self.head(c.slots[s], &ends) == (v, s);
        let check = |i: usize, j: usize| -> Result<bool> {
            match (enters(i), enters(j)) {
                (true, false) => Ok(true),
                (false, true) => Ok(false),
                _ => Err(Error::Orientation(format!(
                    "strand through slots {} and {} of crossing {v} is not coherently directed",
                    i + 1,
                    j + 1
                ))),
            }
        };
        Ok((check(0, 2)?, check(3, 1)?))
    }

    /// Sign of crossing `v`: +1 if the over-strand passes left-to-right
    /// relative to the under-strand's direction of travel, else -1.
    pub fn crossing_sign(&self, v: usize) -> Result<i32> {
        self.base.check_crossing(v)?;
        let (under_13, over_42) = self.strand_directions(v)?;
        Ok(if under_13 == over_42 { 1 } else { -1 })
    }

    pub fn writhe(&self) -> Result<i64> {
        (0..self.base.crossing_count())
            .map(|v| self.crossing_sign(v).map(i64::from))
            .sum()
    }

    /// Same diagram, every arc direction reversed.
    pub fn reversed(&self) -> OrientedDiagram {
        OrientedDiagram {
            base: self.base.clone(),
            forward: self.forward.iter().map(|(&a, &f)| (a, !f)).collect(),
        }
    }

    /// Mirror image with arcs keeping their geometric direction.
    pub fn mirror(&self) -> Result<OrientedDiagram> {
        let ends = self.base.arc_ends();
        let mirrored = self.base.mirror();
        let new_ends = mirrored.arc_ends();
        let mut forward = BTreeMap::new();
        for &arc in ends.keys() {
            let (c, s) = self.head(arc, &ends);
            // flipping rotates slots back by one position
            let head = (c, (s + 3) % 4);
            forward.insert(arc, new_ends[&arc][1] == head && new_ends[&arc][0] != head);
        }
        OrientedDiagram::new(mirrored, forward)
    }
}

/// Writhe of an oriented diagram: the sum of its crossing signs.
pub fn writhe(od: &OrientedDiagram) -> Result<i64> {
    od.writhe()
}

/// Parses an orientation overlay (`O arc +|-` lines) for `base`.
pub fn parse_orientation(base: LinkDiagram, text: &str) -> Result<OrientedDiagram> {
    let mut forward = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        if head != "O" {
            return Err(syntax(
                line,
                col,
                format!("unknown directive `{head}` (expected O)"),
            ));
        }
        if toks.len() != 3 {
            return Err(syntax(line, col, "expected `O <arc> +|-`"));
        }
        let arc = parse_int(line, toks[1])?;
        if arc <= 0 {
            return Err(Error::NonPositiveArc {
                line,
                column: toks[1].0,
            });
        }
        let dir = match toks[2].1 {
            "+" => true,
            "-" => false,
            t => {
                return Err(syntax(
                    line,
                    toks[2].0,
                    format!("expected + or -, found `{t}`"),
                ))
            }
        };
        if forward.insert(ArcId(arc as u32), dir).is_some() {
            return Err(syntax(line, toks[1].0, format!("arc {arc} oriented twice")));
        }
    }
    OrientedDiagram::new(base, forward)
}

pub fn emit_orientation(od: &OrientedDiagram) -> String {
    od.forward
        .iter()
        .map(|(a, &f)| format!("O {a} {}\n", if f { '+' } else { '-' }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_crossings() {
        let d = parse_pd("X 1 2 3 4\nX 3 4 1 2\n").unwrap();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.arcs().len(), 4);
        assert_eq!(d.free_loops(), 0);
    }

    #[test]
    fn parses_free_loop_and_comments() {
        let d = parse_pd("# unknot\n\nL 1  # one circle\n").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_loops(), 1);
    }

    #[test]
    fn incidence_is_global() {
        // arc 2 twice in the second crossing, arc 4 twice overall: fine
        assert!(parse_pd("X 1 2 3 4\nX 3 2 1 4").is_ok());
        assert!(parse_pd("X 1 1 2 2").is_ok());
        assert_eq!(
            parse_pd("X 1 2 3 4"),
            Err(Error::ArcIncidence { arc: 1, count: 1 })
        );
        assert_eq!(
            parse_pd("X 1 1 1 2\nX 2 3 3 4"),
            Err(Error::ArcIncidence { arc: 1, count: 3 })
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_pd("X 1 1 2 2\n  Y 3") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse_pd("X 1 1 2 z") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 9)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_pd("X 1 0 2 2"),
            Err(Error::NonPositiveArc { line: 1, column: 5 })
        );
        assert!(matches!(parse_pd("X 1 2 3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_pd("L -1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn torus_diagrams() {
        assert!(torus_diagram(0).is_err());
        let t1 = torus_diagram(1).unwrap();
        assert_eq!(emit_pd(&t1), "X 2 2 1 1\n");
        let t2 = torus_diagram(2).unwrap();
        assert_eq!((t2.crossing_count(), t2.arcs().len()), (2, 4));
        let t3 = torus_diagram(3).unwrap();
        assert_eq!((t3.crossing_count(), t3.arcs().len()), (3, 6));
        for n in 2..=12 {
            let t = torus_diagram(n).unwrap();
            assert_eq!(t.crossing_count(), n as usize);
            assert_eq!(t.arcs().len(), 2 * n as usize);
        }
    }

    #[test]
    fn framed_unknots() {
        let u0 = framed_unknot(0);
        assert_eq!((u0.crossing_count(), u0.free_loops()), (0, 1));
        assert_eq!(
            framed_unknot(1).canonical_form(),
            torus_diagram(1).unwrap().canonical_form()
        );
        let u = framed_unknot(-2);
        assert_eq!((u.crossing_count(), u.free_loops()), (2, 0));
        let w = OrientedDiagram::from_pd(u).unwrap().writhe().unwrap();
        assert_eq!(w, -2);
        for k in -3..=3 {
            let od = OrientedDiagram::from_pd(framed_unknot(k)).unwrap();
            assert_eq!(od.writhe().unwrap(), k);
        }
    }

    #[test]
    fn r1_appends_crossing_last() {
        let t = torus_diagram(3).unwrap();
        let d = apply_r1(&t, R1Site::Arc(ArcId(2)), -1).unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.crossings()[3].slots()[1], d.crossings()[3].slots()[2]);
        assert_eq!(
            apply_r1(&t, R1Site::Arc(ArcId(99)), 1),
            Err(Error::UnknownArc(99))
        );
        assert!(apply_r1(&t, R1Site::FreeLoop, 1).is_err());
        let od = OrientedDiagram::from_pd(d).unwrap();
        assert_eq!(od.crossing_sign(3).unwrap(), -1);
        assert_eq!(od.writhe().unwrap(), 2);
    }

    #[test]
    fn writhe_examples() {
        let t3 = OrientedDiagram::from_pd(torus_diagram(3).unwrap()).unwrap();
        assert_eq!(writhe(&t3).unwrap(), 3);
        assert_eq!(t3.reversed().writhe().unwrap(), 3);
        let hopf = OrientedDiagram::from_pd(torus_diagram(2).unwrap()).unwrap();
        assert_eq!(hopf.mirror().unwrap().writhe().unwrap(), -2);
        assert_eq!(hopf.mirror().unwrap().reversed().writhe().unwrap(), -2);
    }

    #[test]
    fn orientation_overlay_round_trip() {
        let od = OrientedDiagram::from_pd(torus_diagram(3).unwrap()).unwrap();
        let text = emit_orientation(&od);
        let back = parse_orientation(od.base().clone(), &text).unwrap();
        assert_eq!(back, od);
        // flipping a single arc breaks coherence
        let mut bad = od.directions().clone();
        let f = bad.get_mut(&ArcId(1)).unwrap();
        *f = !*f;
        assert!(matches!(
            OrientedDiagram::new(od.base().clone(), bad),
            Err(Error::Orientation(_))
        ));
        assert!(matches!(
            parse_orientation(od.base().clone(), "O 1 +"),
            Err(Error::Orientation(_))
        ));
    }

    #[test]
    fn smoothing_a_kink_leaves_loops() {
        let t1 = torus_diagram(1).unwrap();
        let (da, _) = t1.smooth_crossing(0, Marker::A).unwrap();
        assert_eq!((da.crossing_count(), da.free_loops()), (0, 2));
        let (db, map) = t1.smooth_crossing(0, Marker::B).unwrap();
        assert_eq!((db.crossing_count(), db.free_loops()), (0, 1));
        assert!(map.values().all(|m| *m == SmoothedArc::Loop(0)));
    }

    #[test]
    fn smoothing_torus_crossing() {
        let t3 = torus_diagram(3).unwrap();
        let (da, _) = t3.smooth_crossing(1, Marker::A).unwrap();
        assert_eq!(da.crossing_count(), 2);
        assert_eq!(da.free_loops(), 0);
        let (db, _) = t3.smooth_crossing(1, Marker::B).unwrap();
        assert_eq!(db.crossing_count(), 2);
        assert!(t3.smooth_crossing(3, Marker::A).is_err());
    }

    #[test]
    fn braid_closure_untouched_strands_are_loops() {
        let d = braid_closure(3, &[1, 1, 1]).unwrap();
        assert_eq!(d.free_loops(), 1);
        assert_eq!(d.crossing_count(), 3);
        let id = braid_closure(2, &[]).unwrap();
        assert_eq!(id, LinkDiagram::unlink(2));
    }
}
