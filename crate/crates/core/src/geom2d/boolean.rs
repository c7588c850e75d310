//! Region boolean operations on the snap grid.
//!
//! The operands are reduced to directed edges carrying winding weights for
//! each operand. Edges near the overlap window are subdivided into a planar
//! arrangement (iterated snap rounding: every crossing, T-junction and
//! collinear overlap becomes a shared grid vertex). Coincident edges are
//! merged by summing weights, then each edge learns the winding numbers of
//! both operands on its left side from an exact ray cast. An edge is kept
//! when the operation's inside/outside status differs across it, oriented
//! with the result on its left, and the kept edges are chained into simple
//! rings.
//!
//! Edges whose bounding boxes miss the overlap window cannot meet the other
//! operand, so they bypass the arrangement and are kept or dropped by rule.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use super::snap::{self, cross, dot, orient, ring_area2, snap_ring, unsnap, IPoint};
use super::{Contour, Region2D, SNAP};
use crate::error::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Difference,
    Intersection,
    Union,
}

impl BoolOp {
    fn keeps(self, in_a: bool, in_b: bool) -> bool {
        match self {
            BoolOp::Difference => in_a && !in_b,
            BoolOp::Intersection => in_a && in_b,
            BoolOp::Union => in_a || in_b,
        }
    }

    /// Whether material of one operand survives where the other operand is
    /// absent.
    fn keeps_lone(self, operand: Operand) -> bool {
        match operand {
            Operand::A => self.keeps(true, false),
            Operand::B => self.keeps(false, true),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Operand {
    A,
    B,
}

/// Undirected edge stored with `a < b`; weights count copies running a->b.
#[derive(Clone, Copy, Debug)]
struct Edge {
    a: IPoint,
    b: IPoint,
    wa: i32,
    wb: i32,
}

impl Edge {
    fn directed(from: IPoint, to: IPoint, wa: i32, wb: i32) -> Option<Edge> {
        match from.cmp(&to) {
            Ordering::Less => Some(Edge { a: from, b: to, wa, wb }),
            Ordering::Greater => Some(Edge {
                a: to,
                b: from,
                wa: -wa,
                wb: -wb,
            }),
            Ordering::Equal => None,
        }
    }

    fn of(operand: Operand, from: IPoint, to: IPoint) -> Option<Edge> {
        match operand {
            Operand::A => Edge::directed(from, to, 1, 0),
            Operand::B => Edge::directed(from, to, 0, 1),
        }
    }

    fn min_y(&self) -> i64 {
        self.a.y.min(self.b.y)
    }

    fn max_y(&self) -> i64 {
        self.a.y.max(self.b.y)
    }

    fn is_vertical(&self) -> bool {
        self.a.x == self.b.x
    }

    fn is_horizontal(&self) -> bool {
        self.a.y == self.b.y
    }
}

#[derive(Clone, Copy, Debug)]
struct IBox {
    min: IPoint,
    max: IPoint,
}

impl IBox {
    fn of_edge(e: &Edge) -> IBox {
        IBox {
            min: IPoint::new(e.a.x, e.min_y()),
            max: IPoint::new(e.b.x, e.max_y()),
        }
    }

    fn intersects(&self, o: &IBox) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }
}

/// Extra margin around the overlap window, millimetres. Snap rounding moves
/// vertices by less than one grid unit per round, far below this.
const WINDOW_MARGIN: f64 = 16.0 * SNAP;

const MAX_ROUNDS: usize = 64;

pub fn difference(a: &Region2D, b: &Region2D) -> Result<Region2D, GeometryError> {
    boolean(a, b, BoolOp::Difference)
}

pub fn intersection(a: &Region2D, b: &Region2D) -> Result<Region2D, GeometryError> {
    boolean(a, b, BoolOp::Intersection)
}

pub fn union(a: &Region2D, b: &Region2D) -> Result<Region2D, GeometryError> {
    boolean(a, b, BoolOp::Union)
}

/// Union of many regions by pairwise reduction.
pub fn union_all(mut regions: Vec<Region2D>) -> Result<Region2D, GeometryError> {
    if regions.is_empty() {
        return Ok(Region2D::empty());
    }
    while regions.len() > 1 {
        let mut next = Vec::with_capacity(regions.len().div_ceil(2));
        let mut it = regions.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(union(&a, &b)?),
                None => next.push(a),
            }
        }
        regions = next;
    }
    Ok(regions.pop().unwrap())
}

fn disjoint_result(a: &Region2D, b: &Region2D, op: BoolOp) -> Region2D {
    match op {
        BoolOp::Difference => a.clone(),
        BoolOp::Intersection => Region2D::empty(),
        BoolOp::Union => {
            let mut outers = a.outers().to_vec();
            outers.extend_from_slice(b.outers());
            let mut holes = a.holes().to_vec();
            holes.extend_from_slice(b.holes());
            Region2D::from_parts_unchecked(outers, holes)
        }
    }
}

pub fn boolean(a: &Region2D, b: &Region2D, op: BoolOp) -> Result<Region2D, GeometryError> {
    let (Some(box_a), Some(box_b)) = (a.bbox(), b.bbox()) else {
        return Ok(disjoint_result(a, b, op));
    };
    let Some(window) = box_a.inflate(WINDOW_MARGIN).intersection(&box_b.inflate(WINDOW_MARGIN)) else {
        return Ok(disjoint_result(a, b, op));
    };
    let window = window.inflate(WINDOW_MARGIN);
    let iwindow = IBox {
        min: IPoint::new(
            snap::snap_coord(window.min.x)? - 1,
            snap::snap_coord(window.min.y)? - 1,
        ),
        max: IPoint::new(
            snap::snap_coord(window.max.x)? + 1,
            snap::snap_coord(window.max.y)? + 1,
        ),
    };

    let mut outers: Vec<Contour> = Vec::new();
    let mut holes: Vec<Contour> = Vec::new();
    let mut candidates: Vec<Edge> = Vec::new();
    // Edges outside the window: they obstruct rays and some are kept verbatim.
    let mut bystanders: Vec<Edge> = Vec::new();
    let mut kept: Vec<(IPoint, IPoint)> = Vec::new();
    let mut far: Vec<(Operand, &Contour)> = Vec::new();

    for (operand, region) in [(Operand::A, a), (Operand::B, b)] {
        let keep = op.keeps_lone(operand);
        for (c, is_hole) in region.contours() {
            if !c.bbox().intersects(&window) {
                if keep {
                    if is_hole {
                        holes.push(c.clone());
                    } else {
                        outers.push(c.clone());
                    }
                }
                far.push((operand, c));
                continue;
            }
            let ring = snap_ring(c.vertices())?;
            if ring.len() < 3 {
                continue;
            }
            for i in 0..ring.len() {
                let (p, q) = (ring[i], ring[(i + 1) % ring.len()]);
                let Some(e) = Edge::of(operand, p, q) else { continue };
                if IBox::of_edge(&e).intersects(&iwindow) {
                    candidates.push(e);
                } else {
                    bystanders.push(e);
                    if keep {
                        kept.push((p, q));
                    }
                }
            }
        }
    }

    if candidates.is_empty() {
        return Ok(disjoint_result(a, b, op));
    }

    let candidates = merge(arrange(candidates)?);
    let mut directed = kept;
    if !candidates.is_empty() {
        let index = RayIndex::build(&candidates, &bystanders, &far)?;
        for (i, e) in candidates.iter().enumerate() {
            let (la, lb) = index.left_winding(i, e);
            let in_left = op.keeps(la != 0, lb != 0);
            let in_right = op.keeps(la - e.wa != 0, lb - e.wb != 0);
            match (in_left, in_right) {
                (true, false) => directed.push((e.a, e.b)),
                (false, true) => directed.push((e.b, e.a)),
                _ => {}
            }
        }
    }

    for ring in chain(directed)? {
        let area2 = ring_area2(&ring);
        let contour = Contour::from_vertices_unchecked(ring.into_iter().map(unsnap).collect());
        if area2 > 0 {
            outers.push(contour);
        } else {
            holes.push(contour);
        }
    }
    Ok(Region2D::from_parts_unchecked(outers, holes))
}

/// First improper contact (crossing, T-junction or overlap) between the
/// region's edges, in millimetres.
pub(crate) fn first_crossing(region: &Region2D) -> Result<Option<(f64, f64)>, GeometryError> {
    let mut edges = Vec::new();
    for (c, _) in region.contours() {
        let ring = snap_ring(c.vertices())?;
        for i in 0..ring.len() {
            if let Some(e) = Edge::of(Operand::A, ring[i], ring[(i + 1) % ring.len()]) {
                edges.push(e);
            }
        }
    }
    let fresh = vec![true; edges.len()];
    let splits = find_splits(&edges, &fresh);
    Ok(splits.first().map(|&(_, p)| {
        let q = unsnap(p);
        (q.x, q.y)
    }))
}

/// Iterated snap rounding until no two edges cross or touch in an interior.
fn arrange(mut edges: Vec<Edge>) -> Result<Vec<Edge>, GeometryError> {
    let mut fresh = vec![true; edges.len()];
    for _ in 0..MAX_ROUNDS {
        let mut splits = find_splits(&edges, &fresh);
        if splits.is_empty() {
            return Ok(edges);
        }
        splits.sort_unstable();
        splits.dedup();
        let mut next = Vec::with_capacity(edges.len() + 2 * splits.len());
        let mut next_fresh = Vec::with_capacity(next.capacity());
        let mut s = 0;
        for (i, e) in edges.iter().enumerate() {
            let start = s;
            while s < splits.len() && splits[s].0 == i {
                s += 1;
            }
            if start == s {
                next.push(*e);
                next_fresh.push(false);
                continue;
            }
            let mut pts: Vec<IPoint> = splits[start..s]
                .iter()
                .map(|&(_, p)| p)
                .filter(|&p| p != e.a && p != e.b)
                .collect();
            pts.sort_by_key(|&p| dot(e.a, e.b, p));
            pts.dedup();
            let mut prev = e.a;
            for p in pts.into_iter().chain(std::iter::once(e.b)) {
                if let Some(sub) = Edge::directed(prev, p, e.wa, e.wb) {
                    next.push(sub);
                    next_fresh.push(true);
                }
                prev = p;
            }
        }
        edges = next;
        fresh = next_fresh;
    }
    let p = unsnap(find_splits(&edges, &fresh).first().map(|s| s.1).unwrap_or(edges[0].a));
    Err(GeometryError::Unresolved { x: p.x, y: p.y })
}

/// Split requests `(edge index, grid point)` for every pair of edges that
/// meet anywhere other than a shared endpoint. Only pairs with at least one
/// fresh edge are tested.
fn find_splits(edges: &[Edge], fresh: &[bool]) -> Vec<(usize, IPoint)> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_unstable_by_key(|&i| edges[i].a.x);
    let mut splits = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let ei = edges[i];
        active.retain(|&j| edges[j].b.x >= ei.a.x);
        for &j in &active {
            if !(fresh[i] || fresh[j]) {
                continue;
            }
            let ej = edges[j];
            if ei.max_y() < ej.min_y() || ej.max_y() < ei.min_y() {
                continue;
            }
            test_pair(i, &ei, j, &ej, &mut splits);
        }
        active.push(i);
    }
    splits
}

#[inline]
fn strictly_inside(e: &Edge, p: IPoint) -> bool {
    e.a < p && p < e.b
}

fn test_pair(i: usize, e1: &Edge, j: usize, e2: &Edge, out: &mut Vec<(usize, IPoint)>) {
    let o1 = orient(e1.a, e1.b, e2.a);
    let o2 = orient(e1.a, e1.b, e2.b);
    if o1 == 0 && o2 == 0 {
        for p in [e2.a, e2.b] {
            if strictly_inside(e1, p) {
                out.push((i, p));
            }
        }
        for p in [e1.a, e1.b] {
            if strictly_inside(e2, p) {
                out.push((j, p));
            }
        }
        return;
    }
    let o3 = orient(e2.a, e2.b, e1.a);
    let o4 = orient(e2.a, e2.b, e1.b);
    if o1 == 0 && strictly_inside(e1, e2.a) {
        out.push((i, e2.a));
    }
    if o2 == 0 && strictly_inside(e1, e2.b) {
        out.push((i, e2.b));
    }
    if o3 == 0 && strictly_inside(e2, e1.a) {
        out.push((j, e1.a));
    }
    if o4 == 0 && strictly_inside(e2, e1.b) {
        out.push((j, e1.b));
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        let p = snap::crossing_point(e1.a, e1.b, e2.a, e2.b);
        if p != e1.a && p != e1.b {
            out.push((i, p));
        }
        if p != e2.a && p != e2.b {
            out.push((j, p));
        }
    }
}

/// Collapses coincident edges, summing their weights.
fn merge(mut edges: Vec<Edge>) -> Vec<Edge> {
    edges.sort_unstable_by(|p, q| (p.a, p.b).cmp(&(q.a, q.b)));
    let mut out: Vec<Edge> = Vec::with_capacity(edges.len());
    for e in edges {
        match out.last_mut() {
            Some(last) if last.a == e.a && last.b == e.b => {
                last.wa += e.wa;
                last.wb += e.wb;
            }
            _ => out.push(e),
        }
    }
    out.retain(|e| e.wa != 0 || e.wb != 0);
    out
}

/// Bucketed obstacle lists for exact winding queries: vertical rays for
/// non-vertical edges, horizontal rays for vertical ones.
struct RayIndex<'a> {
    candidates: &'a [Edge],
    obstacles: Vec<Edge>,
    cols: Buckets,
    rows: Option<Buckets>,
}

struct Buckets {
    lo: i64,
    width: i64,
    lists: Vec<Vec<u32>>,
}

impl Buckets {
    fn new(lo: i64, hi: i64, count: usize) -> Buckets {
        let count = count.max(1);
        let span = (hi - lo).max(1);
        let width = (span + count as i64 - 1) / count as i64;
        let width = width.max(1);
        let n = ((span / width) + 1) as usize;
        Buckets {
            lo,
            width,
            lists: vec![Vec::new(); n],
        }
    }

    fn slot(&self, v: i64) -> usize {
        (((v - self.lo).max(0) / self.width) as usize).min(self.lists.len() - 1)
    }

    fn insert(&mut self, id: u32, from: i64, to: i64) {
        let (s, e) = (self.slot(from), self.slot(to));
        for l in &mut self.lists[s..=e] {
            l.push(id);
        }
    }

    fn get(&self, v: i64) -> &[u32] {
        &self.lists[self.slot(v)]
    }
}

impl<'a> RayIndex<'a> {
    fn build(
        candidates: &'a [Edge],
        bystanders: &[Edge],
        far: &[(Operand, &Contour)],
    ) -> Result<RayIndex<'a>, GeometryError> {
        let mut x_lo = i64::MAX;
        let mut x_hi = i64::MIN;
        let mut y_lo = i64::MAX;
        let mut vy_lo = i64::MAX;
        let mut vy_hi = i64::MIN;
        let mut vx_lo = i64::MAX;
        for e in candidates {
            x_lo = x_lo.min(e.a.x);
            x_hi = x_hi.max(e.b.x);
            y_lo = y_lo.min(e.min_y());
            if e.is_vertical() {
                vy_lo = vy_lo.min(e.a.y);
                vy_hi = vy_hi.max(e.b.y);
                vx_lo = vx_lo.min(e.a.x);
            }
        }
        let has_vertical = vy_lo <= vy_hi;

        // Obstacles: everything that can cross an upward ray from the
        // candidate span, or a rightward ray from a vertical candidate.
        let relevant_up = |e: &Edge| !e.is_vertical() && e.b.x >= x_lo && e.a.x <= x_hi && e.max_y() >= y_lo;
        let relevant_right =
            |e: &Edge| has_vertical && !e.is_horizontal() && e.b.x >= vx_lo && e.max_y() >= vy_lo && e.min_y() <= vy_hi;
        let mut obstacles: Vec<Edge> = Vec::new();
        for e in bystanders {
            if relevant_up(e) || relevant_right(e) {
                obstacles.push(*e);
            }
        }
        let (fx_lo, fx_hi, fy_lo) = (
            x_lo.min(vx_lo) as f64 * SNAP,
            x_hi as f64 * SNAP,
            y_lo.min(vy_lo) as f64 * SNAP,
        );
        for &(operand, c) in far {
            let bb = c.bbox();
            if bb.max.x < fx_lo || bb.max.y < fy_lo || (bb.min.x > fx_hi && !has_vertical) {
                continue;
            }
            let ring = snap_ring(c.vertices())?;
            for i in 0..ring.len() {
                if let Some(e) = Edge::of(operand, ring[i], ring[(i + 1) % ring.len()]) {
                    if relevant_up(&e) || relevant_right(&e) {
                        obstacles.push(e);
                    }
                }
            }
        }

        let total = candidates.len() + obstacles.len();
        let count = ((total as f64).sqrt() * 2.0).ceil() as usize;
        let n_cand = candidates.len() as u32;
        let mut cols = Buckets::new(x_lo, x_hi, count);
        let all = candidates.iter().chain(obstacles.iter());
        for (id, e) in all.clone().enumerate() {
            if relevant_up(e) {
                cols.insert(id as u32, e.a.x.max(x_lo), e.b.x.min(x_hi));
            }
        }
        let rows = if has_vertical {
            let mut rows = Buckets::new(vy_lo, vy_hi, count);
            for (id, e) in all.enumerate() {
                if relevant_right(e) {
                    rows.insert(id as u32, e.min_y().max(vy_lo), e.max_y().min(vy_hi));
                }
            }
            Some(rows)
        } else {
            None
        };
        debug_assert!(n_cand as usize == candidates.len());
        Ok(RayIndex {
            candidates,
            obstacles,
            cols,
            rows,
        })
    }

    fn edge(&self, id: u32) -> &Edge {
        let id = id as usize;
        if id < self.candidates.len() {
            &self.candidates[id]
        } else {
            &self.obstacles[id - self.candidates.len()]
        }
    }

    /// Winding numbers `(A, B)` immediately left of candidate `i` (left of
    /// the direction a->b), probed at the edge midpoint.
    fn left_winding(&self, i: usize, e: &Edge) -> (i32, i32) {
        // Doubled coordinates keep the midpoint on the integer lattice.
        let qx = e.a.x as i128 + e.b.x as i128;
        let qy = e.a.y as i128 + e.b.y as i128;
        let (mut wa, mut wb) = (0i32, 0i32);
        if !e.is_vertical() {
            // a.x < b.x: left is above. Count edges strictly above the probe.
            for &id in self.cols.get(qx.div_euclid(2) as i64) {
                if id as usize == i {
                    continue;
                }
                let f = self.edge(id);
                let (ax, bx) = (2 * f.a.x as i128, 2 * f.b.x as i128);
                if !(ax <= qx && qx < bx) {
                    continue;
                }
                let c = (bx - ax) * (qy - 2 * f.a.y as i128) - 2 * (f.b.y - f.a.y) as i128 * (qx - ax);
                if c < 0 {
                    // Edge runs left-to-right above the probe: contributes -w.
                    wa -= f.wa;
                    wb -= f.wb;
                }
            }
            (wa, wb)
        } else {
            // Upward vertical edge: left is -x. Cast the ray towards +x to get
            // the winding on the right, then step across the edge.
            let rows = self.rows.as_ref().expect("row index exists for vertical candidates");
            for &id in rows.get(qy.div_euclid(2) as i64) {
                if id as usize == i {
                    continue;
                }
                let f = self.edge(id);
                let (lo, hi, up) = if f.a.y < f.b.y { (f.a, f.b, true) } else { (f.b, f.a, false) };
                let (ly, hy) = (2 * lo.y as i128, 2 * hi.y as i128);
                if !(ly <= qy && qy < hy) {
                    continue;
                }
                let c = 2 * (hi.x - lo.x) as i128 * (qy - ly) - (hy - ly) * (qx - 2 * lo.x as i128);
                if c > 0 {
                    let s = if up { 1 } else { -1 };
                    wa += s * f.wa;
                    wb += s * f.wb;
                }
            }
            (wa + e.wa, wb + e.wb)
        }
    }
}

/// Orders candidate outgoing directions by how sharply they turn left
/// relative to `din` (greatest first).
fn turn_cmp(din: IPoint, d1: IPoint, d2: IPoint) -> Ordering {
    let o = IPoint::new(0, 0);
    let group = |d: IPoint| {
        let c = cross(o, din, d);
        if c > 0 {
            2
        } else if c < 0 {
            0
        } else if dot(o, din, d) > 0 {
            1
        } else {
            3
        }
    };
    let (g1, g2) = (group(d1), group(d2));
    g1.cmp(&g2).then_with(|| {
        if g1 == g2 && (g1 == 0 || g1 == 2) {
            cross(o, d2, d1).cmp(&0)
        } else {
            Ordering::Equal
        }
    })
}

/// Chains directed edges into closed rings, splitting rings that revisit a
/// vertex and dropping straight-through vertices.
fn chain(mut edges: Vec<(IPoint, IPoint)>) -> Result<Vec<Vec<IPoint>>, GeometryError> {
    edges.sort_unstable();
    // Vertices where rings touch are kept even when straight, so touching
    // rings always share a vertex instead of meeting mid-edge.
    let pinches: HashSet<IPoint> = edges.windows(2).filter(|w| w[0].0 == w[1].0).map(|w| w[0].0).collect();
    let mut used = vec![false; edges.len()];
    let mut rings = Vec::new();
    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let origin = edges[start].0;
        let mut walk = vec![origin];
        let mut cur = start;
        loop {
            let (from, to) = edges[cur];
            if to == origin {
                break;
            }
            let lo = edges.partition_point(|e| e.0 < to);
            let hi = edges.partition_point(|e| e.0 <= to);
            let din = IPoint::new(to.x - from.x, to.y - from.y);
            let mut best: Option<usize> = None;
            for k in lo..hi {
                if used[k] {
                    continue;
                }
                let d = IPoint::new(edges[k].1.x - to.x, edges[k].1.y - to.y);
                best = match best {
                    None => Some(k),
                    Some(b) => {
                        let db = IPoint::new(edges[b].1.x - to.x, edges[b].1.y - to.y);
                        if turn_cmp(din, d, db) == Ordering::Greater {
                            Some(k)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            let Some(next) = best else {
                let p = unsnap(to);
                return Err(GeometryError::OpenChain { x: p.x, y: p.y });
            };
            used[next] = true;
            walk.push(to);
            cur = next;
        }
        split_at_repeats(walk, &mut rings);
    }
    Ok(rings
        .into_iter()
        .filter_map(|r| simplify_ring(r, &pinches))
        .collect())
}

fn split_at_repeats(walk: Vec<IPoint>, rings: &mut Vec<Vec<IPoint>>) {
    let mut sorted = walk.clone();
    sorted.sort_unstable();
    if sorted.windows(2).all(|w| w[0] != w[1]) {
        rings.push(walk);
        return;
    }
    let mut stack: Vec<IPoint> = Vec::with_capacity(walk.len());
    let mut pos: HashMap<IPoint, usize> = HashMap::new();
    for v in walk {
        if let Some(&k) = pos.get(&v) {
            let ring: Vec<IPoint> = stack.drain(k..).collect();
            for p in &ring {
                pos.remove(p);
            }
            rings.push(ring);
        }
        pos.insert(v, stack.len());
        stack.push(v);
    }
    rings.push(stack);
}

fn simplify_ring(ring: Vec<IPoint>, pinches: &HashSet<IPoint>) -> Option<Vec<IPoint>> {
    let straight_through = |p: IPoint, v: IPoint, n: IPoint| {
        cross(p, v, n) == 0 && dot(v, n, IPoint::new(2 * v.x - p.x, 2 * v.y - p.y)) > 0 && !pinches.contains(&v)
    };
    let mut out: Vec<IPoint> = Vec::with_capacity(ring.len());
    for p in ring {
        out.push(p);
        while out.len() >= 3 {
            let n = out.len();
            if straight_through(out[n - 3], out[n - 2], out[n - 1]) {
                out.remove(n - 2);
            } else {
                break;
            }
        }
    }
    loop {
        let n = out.len();
        if n < 3 {
            return None;
        }
        if straight_through(out[n - 2], out[n - 1], out[0]) {
            out.pop();
        } else if straight_through(out[n - 1], out[0], out[1]) {
            out.remove(0);
        } else {
            break;
        }
    }
    if ring_area2(&out) == 0 {
        return None;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::{Point2, PointClass};

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Region2D {
        Region2D::rect(Point2::new(x0, y0), Point2::new(x1, y1))
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn disjoint_difference_keeps_area() {
        let a = rect(0.0, 0.0, 10.0, 10.0);
        let b = rect(50.0, 50.0, 60.0, 60.0);
        assert_eq!(difference(&a, &b).unwrap().area(), 100.0);
        assert!(intersection(&a, &b).unwrap().is_empty());
        assert_eq!(union(&a, &b).unwrap().area(), 200.0);
    }

    #[test]
    fn self_difference_is_empty() {
        let a = rect(0.0, 0.0, 10.0, 10.0);
        let d = difference(&a, &a).unwrap();
        assert!(d.is_empty(), "{d:?}");
        assert_eq!(d.area(), 0.0);
        assert!(close(intersection(&a, &a).unwrap().area(), 100.0, 1e-9));
        assert!(close(union(&a, &a).unwrap().area(), 100.0, 1e-9));
    }

    #[test]
    fn overlapping_squares() {
        let a = rect(0.0, 0.0, 2.0, 1.0);
        let b = rect(1.0, 0.0, 3.0, 1.0);
        assert!(close(intersection(&a, &b).unwrap().area(), 1.0, 1e-12));
        assert!(close(difference(&a, &b).unwrap().area(), 1.0, 1e-12));
        assert!(close(union(&a, &b).unwrap().area(), 3.0, 1e-12));
        let u = union(&a, &b).unwrap();
        assert_eq!(u.outers().len(), 1);
        assert_eq!(u.outers()[0].len(), 4, "collinear vertices should be removed");
    }

    #[test]
    fn interior_cut_creates_hole() {
        let a = rect(0.0, 0.0, 10.0, 10.0);
        let b = rect(4.0, 4.0, 6.0, 6.0);
        let d = difference(&a, &b).unwrap();
        assert_eq!(d.outers().len(), 1);
        assert_eq!(d.holes().len(), 1);
        assert!(close(d.area(), 96.0, 1e-12));
        assert_eq!(d.point_in(Point2::new(5.0, 5.0)), PointClass::Outside);
        assert_eq!(d.point_in(Point2::new(1.0, 5.0)), PointClass::Inside);
        d.validate().unwrap();
    }

    #[test]
    fn cut_through_splits_region() {
        let a = rect(0.0, 0.0, 10.0, 10.0);
        let b = rect(4.0, -1.0, 6.0, 11.0);
        let d = difference(&a, &b).unwrap();
        assert_eq!(d.outers().len(), 2);
        assert!(close(d.area(), 80.0, 1e-12));
        d.validate().unwrap();
    }

    #[test]
    fn corner_touching_squares_stay_separate() {
        let a = rect(0.0, 0.0, 1.0, 1.0);
        let b = rect(1.0, 1.0, 2.0, 2.0);
        let u = union(&a, &b).unwrap();
        assert!(close(u.area(), 2.0, 1e-12));
        assert_eq!(u.outers().len(), 2);
        for c in u.outers() {
            assert_eq!(c.len(), 4);
        }
    }

    #[test]
    fn hole_touching_boundary_is_split_off() {
        // Removing a triangle whose apex touches the bottom edge from inside.
        let a = rect(-2.0, 0.0, 2.0, 4.0);
        let tri = Region2D::from_polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(-1.0, 1.0),
        ])
        .unwrap();
        let d = difference(&a, &tri).unwrap();
        assert!(close(d.area(), 15.0, 1e-12));
        assert_eq!(d.holes().len(), 1);
        for (c, _) in d.contours() {
            let mut v: Vec<_> = c.vertices().iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect();
            v.sort();
            v.dedup();
            assert_eq!(v.len(), c.len(), "contour revisits a vertex");
        }
    }

    #[test]
    fn shared_edge_difference() {
        let a = rect(0.0, 0.0, 2.0, 2.0);
        let b = rect(0.0, 0.0, 1.0, 2.0);
        let d = difference(&a, &b).unwrap();
        assert!(close(d.area(), 2.0, 1e-12));
        assert_eq!(d.outers()[0].len(), 4);
    }

    #[test]
    fn union_all_of_row_of_squares() {
        let squares: Vec<Region2D> = (0..7).map(|i| rect(i as f64, 0.0, i as f64 + 1.5, 1.0)).collect();
        let u = union_all(squares).unwrap();
        assert!(close(u.area(), 7.5, 1e-12));
        assert_eq!(u.outers().len(), 1);
        assert_eq!(u.outers()[0].len(), 4);
    }

    #[test]
    fn crossing_detection_finds_bowtie() {
        let r = Region2D::from_parts_unchecked(
            vec![Contour::from_vertices_unchecked(vec![
                Point2::new(0.0, 0.0),
                Point2::new(2.0, 2.0),
                Point2::new(2.0, 0.0),
                Point2::new(0.0, 2.0),
            ])],
            vec![],
        );
        let (x, y) = first_crossing(&r).unwrap().unwrap();
        assert!(close(x, 1.0, 1e-9) && close(y, 1.0, 1e-9));
    }

    #[test]
    fn turn_order_prefers_left() {
        let din = IPoint::new(1, 0);
        let left = IPoint::new(0, 1);
        let straight = IPoint::new(1, 0);
        let right = IPoint::new(0, -1);
        assert_eq!(turn_cmp(din, left, straight), Ordering::Greater);
        assert_eq!(turn_cmp(din, straight, right), Ordering::Greater);
        assert_eq!(turn_cmp(din, IPoint::new(-1, 1), left), Ordering::Greater);
        assert_eq!(turn_cmp(din, IPoint::new(1, -1), IPoint::new(-1, -1)), Ordering::Greater);
    }
}
