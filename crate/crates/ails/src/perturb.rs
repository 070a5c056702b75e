//! Initial construction and the perturbation heuristics: three ways to
//! remove vertices from a reference solution and two ways to put them back.
//! Perturbed solutions stay complete (every customer assigned) but may
//! violate capacity; the search engine repairs them afterwards.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::{Instance, NeighborData};
use crate::solution::{proximity_index, Solution};

/// The removal heuristics a perturbation can use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalKind {
    /// A random center plus its nearest assigned customers.
    Concentric,
    /// Vertices drawn with probability decreasing in their closeness to
    /// their own route.
    Proximity,
    /// Random contiguous runs of route positions.
    Sequence,
}

pub const REMOVAL_KINDS: [RemovalKind; 3] = [
    RemovalKind::Concentric,
    RemovalKind::Proximity,
    RemovalKind::Sequence,
];

/// Perturbation degree as an actual removal count: nearest integer, at
/// least one, never more than the number of assigned customers.
fn removal_count(degree: f64, assigned: usize) -> usize {
    (degree.round() as usize).clamp(1, assigned.max(1))
}

/// Cheapest insertion slot for `v` in route `i`: the returned slot is the
/// predecessor position; cost is the detour of inserting between it and
/// its successor.
pub(crate) fn best_insert_slot(s: &Solution, i: usize, v: u32, inst: &Instance) -> (usize, f64) {
    let verts = s.route(i).vertices();
    let mut best = (0usize, f64::INFINITY);
    for slot in 0..verts.len() - 1 {
        let (a, b) = (verts[slot] as usize, verts[slot + 1] as usize);
        let cost =
            inst.distance(a, v as usize) + inst.distance(v as usize, b) - inst.distance(a, b);
        if cost < best.1 {
            best = (slot, cost);
        }
    }
    best
}

/// Build a fresh solution: the minimum number of routes, each seeded with
/// one random customer, and every other customer inserted into the closest
/// route at its cheapest position. The result may violate capacity.
pub fn construct_initial(inst: &Instance, nd: &NeighborData, rng: &mut impl Rng) -> Solution {
    let m = inst.min_routes();
    let mut s = Solution::empty(inst, m);
    let mut customers: Vec<u32> = (1..=inst.n as u32).collect();
    customers.shuffle(rng);
    let mut pool = customers;
    for route in 0..m {
        let seed = pool.pop().expect("at least one customer per route");
        s.insert_after(route, 0, seed, inst);
    }
    let depth = rng.gen_range(1..=(inst.n / m).max(1));
    insert_by_proximity(&mut s, &mut pool, depth, inst, nd);
    s
}

/// Concentric removal: a random assigned center and its `count - 1`
/// closest assigned customers join the pool.
pub fn remove_concentric(
    s: &mut Solution,
    pool: &mut Vec<u32>,
    degree: f64,
    inst: &Instance,
    nd: &NeighborData,
    rng: &mut impl Rng,
) {
    let assigned = s.assigned_customers();
    if assigned.is_empty() {
        return;
    }
    let count = removal_count(degree, assigned.len());
    let center = assigned[rng.gen_range(0..assigned.len())];
    let mut by_closeness: Vec<u32> = assigned.into_iter().filter(|&c| c != center).collect();
    by_closeness.sort_by_key(|&c| nd.rank(center as usize, c as usize));

    let mut remove_one = |s: &mut Solution, c: u32| {
        let (route, k) = s.position(c as usize).expect("assigned customer");
        s.remove_at(route, k, inst);
        pool.push(c);
    };
    remove_one(&mut *s, center);
    for &c in by_closeness.iter().take(count - 1) {
        remove_one(&mut *s, c);
    }
}

/// Position draw for proximity removal: customers are sorted by
/// decreasing proximity index, and position `o` of a list of `len` is
/// chosen with probability `(2(len - o) - 1) / len^2`.
pub fn draw_removal_position(len: usize, rng: &mut impl Rng) -> usize {
    debug_assert!(len > 0);
    // Inverse transform: P(x <= t) = (t / len)^2 for t = len - o.
    let u: f64 = rng.gen();
    let x = ((len as f64) * (1.0 - u).sqrt()).ceil() as usize;
    len - x.clamp(1, len)
}

/// Proximity removal: repeatedly drop one assigned customer, favoring
/// those whose route-mates rank far from them.
pub fn remove_by_proximity(
    s: &mut Solution,
    pool: &mut Vec<u32>,
    degree: f64,
    depth: usize,
    inst: &Instance,
    nd: &NeighborData,
    rng: &mut impl Rng,
) {
    let assigned = s.assigned_customers();
    if assigned.is_empty() {
        return;
    }
    let count = removal_count(degree, assigned.len());

    let mut prox = vec![f64::NAN; inst.num_vertices()];
    for &c in &assigned {
        let (route, _) = s.position(c as usize).unwrap();
        prox[c as usize] = proximity_index(c as usize, depth, s.route(route), nd, inst.n);
    }

    let mut remaining = assigned;
    for _ in 0..count {
        if remaining.is_empty() {
            break;
        }
        // decreasing proximity index, ties by customer index
        remaining.sort_by(|&a, &b| {
            prox[b as usize]
                .partial_cmp(&prox[a as usize])
                .unwrap()
                .then(a.cmp(&b))
        });
        let o = draw_removal_position(remaining.len(), rng);
        let victim = remaining.remove(o);
        let (route, k) = s.position(victim as usize).expect("assigned customer");
        s.remove_at(route, k, inst);
        pool.push(victim);
        // only route-mates of the victim see their index change
        for idx in 1..s.route(route).last_index() {
            let c = s.route(route).get(idx) as usize;
            prox[c] = proximity_index(c, depth, s.route(route), nd, inst.n);
        }
    }
}

/// Sequence removal: random contiguous windows of a route's cyclic vertex
/// order are cleared until `count` customers are pooled. A window may span
/// the depot, which is skipped but never removed.
pub fn remove_sequences(
    s: &mut Solution,
    pool: &mut Vec<u32>,
    degree: f64,
    inst: &Instance,
    rng: &mut impl Rng,
) {
    let assigned = s.assigned_customers();
    if assigned.is_empty() {
        return;
    }
    let count = removal_count(degree, assigned.len());
    let max_len = (inst.n / s.route_count().max(1)).max(1);

    let mut removed = 0usize;
    while removed < count {
        let assigned = s.assigned_customers();
        if assigned.is_empty() {
            break;
        }
        let start = assigned[rng.gen_range(0..assigned.len())];
        let window = rng.gen_range(1..=max_len).min(count - removed);
        let (route, k) = s.position(start as usize).expect("assigned customer");

        // cycle over [depot, c1, .., ck]; the final depot sentinel is the
        // same cycle slot as the leading one
        let verts = s.route(route).vertices();
        let cycle_len = verts.len() - 1;
        let take = window.min(cycle_len);
        let victims: Vec<u32> = (0..take)
            .map(|off| verts[(k + off) % cycle_len])
            .filter(|&v| v != 0)
            .collect();
        for v in victims {
            let (r, kk) = s.position(v as usize).expect("assigned customer");
            s.remove_at(r, kk, inst);
            pool.push(v);
            removed += 1;
        }
    }
}

/// Insertion by proximity: each pooled vertex goes to the route whose
/// customers rank closest to it, at the cheapest position there.
pub fn insert_by_proximity(
    s: &mut Solution,
    pool: &mut Vec<u32>,
    depth: usize,
    inst: &Instance,
    nd: &NeighborData,
) {
    for v in pool.drain(..) {
        let mut best_route = 0usize;
        let mut best_prox = f64::INFINITY;
        for i in 0..s.route_count() {
            let p = proximity_index(v as usize, depth, s.route(i), nd, inst.n);
            if p < best_prox {
                best_prox = p;
                best_route = i;
            }
        }
        let (slot, _) = best_insert_slot(s, best_route, v, inst);
        s.insert_after(best_route, slot, v, inst);
    }
}

/// Insertion by cost: each pooled vertex goes wherever the detour is
/// smallest over every route and position.
pub fn insert_by_cost(s: &mut Solution, pool: &mut Vec<u32>, inst: &Instance) {
    for v in pool.drain(..) {
        let mut best = (0usize, 0usize, f64::INFINITY);
        for i in 0..s.route_count() {
            let (slot, cost) = best_insert_slot(s, i, v, inst);
            if cost < best.2 {
                best = (i, slot, cost);
            }
        }
        s.insert_after(best.0, best.1, v, inst);
    }
}

/// One perturbation: copy the reference, possibly grow or shrink the route
/// count by one, remove `degree` vertices with the chosen heuristic, and
/// reinsert everything with a randomly chosen insertion heuristic.
pub fn perturb(
    reference: &Solution,
    kind: RemovalKind,
    degree: f64,
    period: u32,
    inst: &Instance,
    nd: &NeighborData,
    rng: &mut impl Rng,
) -> Solution {
    let mut s = reference.clone();
    let mut pool: Vec<u32> = Vec::new();

    if period > 0 && rng.gen_range(0..period) == 0 {
        if rng.gen_bool(0.5) {
            if s.route_count() < inst.n {
                s.push_empty_route();
            }
        } else if s.route_count() > inst.min_routes() {
            let doomed = rng.gen_range(0..s.route_count());
            pool.extend(s.take_route(doomed));
        }
    }

    let depth = rng.gen_range(1..=(inst.n / s.route_count().max(1)).max(1));
    match kind {
        RemovalKind::Concentric => remove_concentric(&mut s, &mut pool, degree, inst, nd, rng),
        RemovalKind::Proximity => {
            remove_by_proximity(&mut s, &mut pool, degree, depth, inst, nd, rng)
        }
        RemovalKind::Sequence => remove_sequences(&mut s, &mut pool, degree, inst, rng),
    }

    if rng.gen_bool(0.5) {
        insert_by_proximity(&mut s, &mut pool, depth, inst, nd);
    } else {
        insert_by_cost(&mut s, &mut pool, inst);
    }
    s
}
