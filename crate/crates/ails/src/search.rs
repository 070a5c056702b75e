//! The unified neighborhood engine: inter-route shift, swap and tail
//! exchange restricted to nearest-neighbor pairs, plus intra-route local
//! search. The same machinery runs in two modes, one repairing capacity
//! violations and one descending to a local optimum.

use std::collections::BTreeMap;

use crate::instance::{Instance, NeighborData};
use crate::solution::Solution;

/// Strict-improvement threshold. Costs on rounded instances are integers,
/// for which this is equivalent to exact comparison.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MoveKind {
    /// Relocate one vertex from route `i` to route `j`.
    Shift,
    /// Exchange a vertex of route `i` with a vertex of route `j`.
    Swap,
    /// Exchange the suffixes of routes `i` and `j`.
    TwoOptStar,
}

/// A candidate inter-route change, priced without being applied.
#[derive(Debug, Clone, Copy)]
pub struct Move {
    pub kind: MoveKind,
    pub route_i: usize,
    pub route_j: usize,
    /// Position in route `i`: the moved vertex (shift/swap) or the last
    /// kept position before the exchanged tail.
    pub k: usize,
    /// Position in route `j`: the insertion predecessor (shift), the swap
    /// partner, or the last kept position before the exchanged tail.
    pub l: usize,
    /// Objective change.
    pub delta: f64,
    /// Reduction of total capacity violation.
    pub gain: f64,
    /// Selection metric: repair mode ranks by [`move_score`], descent mode
    /// by `delta`.
    pub score: f64,
}

/// What the engine is trying to achieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Drive the total overload to zero, adding routes when stuck.
    Feasibility,
    /// Strictly descend on cost until no qualifying move remains.
    LocalSearch,
}

/// Best move found per unordered route pair.
pub type MoveList = BTreeMap<(usize, usize), Move>;

/// Objective change of relocating the vertex at position `k` of route `i`
/// to sit right after position `l` of route `j`.
pub fn delta_shift(s: &Solution, inst: &Instance, i: usize, k: usize, j: usize, l: usize) -> f64 {
    let ri = s.route(i).vertices();
    let rj = s.route(j).vertices();
    let v = ri[k] as usize;
    let (prev, next) = (ri[k - 1] as usize, ri[k + 1] as usize);
    let (a, b) = (rj[l] as usize, rj[l + 1] as usize);
    inst.distance(prev, next) + inst.distance(a, v) + inst.distance(v, b)
        - inst.distance(prev, v)
        - inst.distance(v, next)
        - inst.distance(a, b)
}

/// Objective change of exchanging the vertices at position `k` of route `i`
/// and position `l` of route `j` (distinct routes, so the vertices are
/// never adjacent).
pub fn delta_swap(s: &Solution, inst: &Instance, i: usize, k: usize, j: usize, l: usize) -> f64 {
    let ri = s.route(i).vertices();
    let rj = s.route(j).vertices();
    let v = ri[k] as usize;
    let u = rj[l] as usize;
    let (pv, nv) = (ri[k - 1] as usize, ri[k + 1] as usize);
    let (pu, nu) = (rj[l - 1] as usize, rj[l + 1] as usize);
    inst.distance(pv, u) + inst.distance(u, nv) + inst.distance(pu, v) + inst.distance(v, nu)
        - inst.distance(pv, v)
        - inst.distance(v, nv)
        - inst.distance(pu, u)
        - inst.distance(u, nu)
}

/// Objective change of exchanging the suffix after position `k` of route
/// `i` with the suffix after position `l` of route `j`.
pub fn delta_two_opt_star(
    s: &Solution,
    inst: &Instance,
    i: usize,
    k: usize,
    j: usize,
    l: usize,
) -> f64 {
    let ri = s.route(i).vertices();
    let rj = s.route(j).vertices();
    let (vk, vk1) = (ri[k] as usize, ri[k + 1] as usize);
    let (ul, ul1) = (rj[l] as usize, rj[l + 1] as usize);
    inst.distance(ul, vk1) + inst.distance(vk, ul1)
        - inst.distance(vk, vk1)
        - inst.distance(ul, ul1)
}

/// Reduction of total capacity violation a move would produce, from load
/// arithmetic alone.
pub fn feasibility_gain(s: &Solution, inst: &Instance, mv: &Move) -> f64 {
    let cap = inst.capacity;
    let ri = s.route(mv.route_i);
    let rj = s.route(mv.route_j);
    let (si, sj) = (ri.slack(cap), rj.slack(cap));
    let transfer_to_j: i64 = match mv.kind {
        MoveKind::Shift => inst.demand(ri.get(mv.k) as usize) as i64,
        MoveKind::Swap => {
            inst.demand(ri.get(mv.k) as usize) as i64 - inst.demand(rj.get(mv.l) as usize) as i64
        }
        MoveKind::TwoOptStar => ri.tail_load(mv.k) as i64 - rj.tail_load(mv.l) as i64,
    };
    let si_new = si + transfer_to_j;
    let sj_new = sj - transfer_to_j;
    (si_new.min(0) + sj_new.min(0) - si.min(0) - sj.min(0)) as f64
}

/// Repair-mode ranking: improving moves rank by their cost change, while
/// worsening moves rank by cost paid per unit of violation removed.
pub fn move_score(delta: f64, gain: f64) -> f64 {
    if delta <= 0.0 {
        delta
    } else {
        delta / gain
    }
}

fn offer(lm: &mut MoveList, mv: Move) {
    let key = (mv.route_i.min(mv.route_j), mv.route_i.max(mv.route_j));
    match lm.get_mut(&key) {
        Some(cur) => {
            if mv.score < cur.score {
                *cur = mv;
            }
        }
        None => {
            lm.insert(key, mv);
        }
    }
}

/// Scan route `i` against the nearest-neighbor lists and fold qualifying
/// moves into `lm`, keeping the best per route pair.
pub fn update_lm(
    s: &Solution,
    i: usize,
    lm: &mut MoveList,
    mode: SearchMode,
    inst: &Instance,
    nd: &NeighborData,
) {
    let cap = inst.capacity;
    let slack_i = s.route(i).slack(cap);
    // Neighbor lists cannot reach an empty route, so repair mode funnels
    // overload into the first one explicitly.
    let empty_route = match mode {
        SearchMode::Feasibility if slack_i < 0 => {
            (0..s.route_count()).find(|&j| j != i && s.route(j).is_empty())
        }
        _ => None,
    };

    let consider = |lm: &mut MoveList, kind: MoveKind, k: usize, j: usize, l: usize| {
        let delta = match kind {
            MoveKind::Shift => delta_shift(s, inst, i, k, j, l),
            MoveKind::Swap => delta_swap(s, inst, i, k, j, l),
            MoveKind::TwoOptStar => delta_two_opt_star(s, inst, i, k, j, l),
        };
        let mut mv = Move {
            kind,
            route_i: i,
            route_j: j,
            k,
            l,
            delta,
            gain: 0.0,
            score: 0.0,
        };
        mv.gain = feasibility_gain(s, inst, &mv);
        match mode {
            SearchMode::Feasibility => {
                if mv.gain > 0.0 {
                    mv.score = move_score(mv.delta, mv.gain);
                    offer(lm, mv);
                }
            }
            SearchMode::LocalSearch => {
                if mv.gain >= 0.0 && mv.delta < -EPS {
                    mv.score = mv.delta;
                    offer(lm, mv);
                }
            }
        }
    };

    let last = s.route(i).last_index();
    for k in 1..last {
        let v = s.route(i).get(k);
        for &u in nd.near(v as usize) {
            if u == 0 {
                continue;
            }
            let Some((j, l)) = s.position(u as usize) else {
                continue;
            };
            if j == i {
                continue;
            }
            if mode == SearchMode::Feasibility {
                let slack_j = s.route(j).slack(cap);
                if (slack_i >= 0) == (slack_j >= 0) {
                    continue;
                }
            }
            // Insertion on either side of the neighbor, the position swap,
            // and both tail exchanges that touch the neighbor's edges.
            consider(lm, MoveKind::Shift, k, j, l);
            consider(lm, MoveKind::Shift, k, j, l - 1);
            consider(lm, MoveKind::Swap, k, j, l);
            consider(lm, MoveKind::TwoOptStar, k, j, l);
            consider(lm, MoveKind::TwoOptStar, k, j, l - 1);
        }
        if let Some(j) = empty_route {
            consider(lm, MoveKind::Shift, k, j, 0);
        }
    }
}

/// Apply a priced move.
pub fn apply_move(s: &mut Solution, mv: &Move, inst: &Instance) {
    match mv.kind {
        MoveKind::Shift => {
            let v = s.remove_at(mv.route_i, mv.k, inst);
            s.insert_after(mv.route_j, mv.l, v, inst);
        }
        MoveKind::Swap => {
            s.swap_vertices(mv.route_i, mv.k, mv.route_j, mv.l, inst);
        }
        MoveKind::TwoOptStar => {
            s.exchange_tails(mv.route_i, mv.k, mv.route_j, mv.l, inst);
        }
    }
}

fn select_best(lm: &MoveList) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), f64)> = None;
    for (&key, mv) in lm {
        match best {
            Some((_, score)) if mv.score >= score => {}
            _ => best = Some((key, mv.score)),
        }
    }
    best.map(|(key, _)| key)
}

fn drain(
    s: &mut Solution,
    lm: &mut MoveList,
    mode: SearchMode,
    inst: &Instance,
    nd: &NeighborData,
) {
    while let Some(key) = select_best(lm) {
        let mv = lm.remove(&key).unwrap();
        apply_move(s, &mv, inst);
        let (i, j) = (mv.route_i, mv.route_j);
        lm.retain(|&(a, b), _| a != i && a != j && b != i && b != j);
        intra_route_search(s, i, inst);
        intra_route_search(s, j, inst);
        update_lm(s, i, lm, mode, inst, nd);
        update_lm(s, j, lm, mode, inst, nd);
    }
}

fn rebuild(s: &Solution, mode: SearchMode, inst: &Instance, nd: &NeighborData) -> MoveList {
    let mut lm = MoveList::new();
    for i in 0..s.route_count() {
        update_lm(s, i, &mut lm, mode, inst, nd);
    }
    lm
}

/// Run the engine to completion.
///
/// Repair mode loops until the solution respects capacity, appending an
/// empty route whenever the move list drains while violations remain;
/// every applied move strictly reduces total overload, so the loop
/// terminates. Descent mode repeats full scans until none yields a move,
/// leaving every scanned-and-qualifying move non-improving.
pub fn neighborhood_search(s: &mut Solution, mode: SearchMode, inst: &Instance, nd: &NeighborData) {
    match mode {
        SearchMode::Feasibility => {
            let mut added = 0usize;
            while !s.is_capacity_feasible(inst) {
                let mut lm = rebuild(s, mode, inst, nd);
                drain(s, &mut lm, mode, inst, nd);
                if !s.is_capacity_feasible(inst) {
                    s.push_empty_route();
                    added += 1;
                    // n singleton routes are always feasible, so needing
                    // more routes than vertices is a logic error.
                    assert!(
                        added <= inst.num_vertices(),
                        "feasibility search failed to converge"
                    );
                }
            }
        }
        SearchMode::LocalSearch => loop {
            let mut lm = rebuild(s, mode, inst, nd);
            if lm.is_empty() {
                return;
            }
            drain(s, &mut lm, mode, inst, nd);
        },
    }
}

/// Objective change of relocating the vertex at position `k` of route `i`
/// to sit between positions `slot` and `slot + 1` of the same route,
/// indices referring to the unmodified sequence. Requires
/// `slot != k - 1 && slot != k`.
pub fn delta_intra_relocate(
    s: &Solution,
    inst: &Instance,
    i: usize,
    k: usize,
    slot: usize,
) -> f64 {
    let verts = s.route(i).vertices();
    let d = |a: u32, b: u32| inst.distance(a as usize, b as usize);
    let v = verts[k];
    d(verts[k - 1], verts[k + 1]) - d(verts[k - 1], v) - d(v, verts[k + 1])
        + d(verts[slot], v)
        + d(v, verts[slot + 1])
        - d(verts[slot], verts[slot + 1])
}

/// Objective change of exchanging the vertices at positions `k < l` of
/// route `i`.
pub fn delta_intra_swap(s: &Solution, inst: &Instance, i: usize, k: usize, l: usize) -> f64 {
    let verts = s.route(i).vertices();
    let d = |a: u32, b: u32| inst.distance(a as usize, b as usize);
    let (v, u) = (verts[k], verts[l]);
    if l == k + 1 {
        d(verts[k - 1], u) + d(v, verts[l + 1]) - d(verts[k - 1], v) - d(u, verts[l + 1])
    } else {
        d(verts[k - 1], u) + d(u, verts[k + 1]) + d(verts[l - 1], v) + d(v, verts[l + 1])
            - d(verts[k - 1], v)
            - d(v, verts[k + 1])
            - d(verts[l - 1], u)
            - d(u, verts[l + 1])
    }
}

/// Objective change of reversing the segment `k + 1 ..= l` of route `i`,
/// i.e. replacing edges `(k, k+1)` and `(l, l+1)` with `(k, l)` and
/// `(k+1, l+1)`. Requires `l >= k + 2`.
pub fn delta_intra_reverse(s: &Solution, inst: &Instance, i: usize, k: usize, l: usize) -> f64 {
    let verts = s.route(i).vertices();
    let d = |a: u32, b: u32| inst.distance(a as usize, b as usize);
    d(verts[k], verts[l]) + d(verts[k + 1], verts[l + 1])
        - d(verts[k], verts[k + 1])
        - d(verts[l], verts[l + 1])
}

/// Best-improvement descent of a single route under relocation, exchange
/// and segment reversal. Only strictly improving moves are taken.
pub fn intra_route_search(s: &mut Solution, i: usize, inst: &Instance) {
    loop {
        let last = s.route(i).last_index();
        if last < 3 {
            return; // one customer or fewer: nothing to reorder
        }

        // (delta, kind, k, l); kind 0 relocate, 1 swap, 2 reverse
        let mut best: Option<(f64, u8, usize, usize)> = None;
        let mut push = |delta: f64, kind: u8, k: usize, l: usize| {
            if delta < -EPS && best.is_none_or(|(bd, ..)| delta < bd) {
                best = Some((delta, kind, k, l));
            }
        };

        for k in 1..last {
            for slot in 0..last {
                if slot == k - 1 || slot == k {
                    continue;
                }
                push(delta_intra_relocate(s, inst, i, k, slot), 0, k, slot);
            }
        }
        for k in 1..last {
            for l in (k + 1)..last {
                push(delta_intra_swap(s, inst, i, k, l), 1, k, l);
            }
        }
        for k in 0..last.saturating_sub(2) {
            for l in (k + 2)..last {
                push(delta_intra_reverse(s, inst, i, k, l), 2, k, l);
            }
        }

        let Some((_, kind, k, l)) = best else { return };
        match kind {
            0 => {
                let v = s.remove_at(i, k, inst);
                let slot = if l > k { l - 1 } else { l };
                s.insert_after(i, slot, v, inst);
            }
            1 => s.swap_vertices(i, k, i, l, inst),
            _ => s.reverse_segment(i, k + 1, l, inst),
        }
    }
}
