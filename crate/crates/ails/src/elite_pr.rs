//! Elite solution pools and path-relinking between same-sized solutions,
//! plus the hybrid driver that weaves relinking into the iterated local
//! search.

use std::collections::BTreeMap;

use rand::Rng;

use crate::adaptive::{repair_and_optimize, run_ails_inner};
use crate::instance::{Instance, NeighborData};
use crate::params::{Params, RunStats, Stop};
use crate::perturb::best_insert_slot;
use crate::search::{neighborhood_search, SearchMode, EPS};
use crate::solution::Solution;

/// A stored elite solution with its cached cost and edge set.
#[derive(Debug, Clone)]
pub struct EliteEntry {
    pub solution: Solution,
    pub cost: f64,
    edges: Vec<(u32, u32)>,
}

/// Pools of mutually distant high-quality solutions, one pool per route
/// count.
#[derive(Debug, Clone)]
pub struct EliteFamily {
    by_routes: BTreeMap<usize, Vec<EliteEntry>>,
    capacity: usize,
    min_distance: f64,
}

fn edge_sym_diff(a: &[(u32, u32)], b: &[(u32, u32)]) -> usize {
    let mut common = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

impl EliteFamily {
    pub fn new(capacity: usize, min_distance: f64) -> EliteFamily {
        EliteFamily {
            by_routes: BTreeMap::new(),
            capacity,
            min_distance,
        }
    }

    /// Pool of solutions with exactly `routes` routes.
    pub fn set(&self, routes: usize) -> &[EliteEntry] {
        self.by_routes.get(&routes).map_or(&[], |v| v.as_slice())
    }

    /// All pools, keyed by route count.
    pub fn pools(&self) -> impl Iterator<Item = (usize, &[EliteEntry])> {
        self.by_routes.iter().map(|(&m, v)| (m, v.as_slice()))
    }

    /// Offer a feasible solution to its pool. Distant solutions join while
    /// space remains; otherwise a candidate no worse than the pool's worst
    /// and not crowding a strictly better member displaces either every
    /// dominated near member or, failing that, the member closest in cost
    /// from above.
    pub fn update(&mut self, s: &Solution) -> bool {
        let entry = EliteEntry {
            cost: s.objective(),
            edges: s.edge_set(),
            solution: s.clone(),
        };
        let pool = self.by_routes.entry(s.route_count()).or_default();

        if pool.len() < self.capacity
            && pool
                .iter()
                .all(|e| edge_sym_diff(&entry.edges, &e.edges) as f64 > self.min_distance)
        {
            pool.push(entry);
            return true;
        }

        // Non-empty here: either the pool is full, or a member within the
        // minimum distance blocked the first branch.
        let worst = pool
            .iter()
            .map(|e| e.cost)
            .fold(f64::NEG_INFINITY, f64::max);
        let blocked_by_better = pool.iter().any(|e| {
            e.cost < entry.cost
                && edge_sym_diff(&entry.edges, &e.edges) as f64 <= self.min_distance
        });
        if entry.cost > worst || blocked_by_better {
            return false;
        }

        let dominated_near: Vec<usize> = pool
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                e.cost >= entry.cost
                    && edge_sym_diff(&entry.edges, &e.edges) as f64 <= self.min_distance
            })
            .map(|(i, _)| i)
            .collect();
        if !dominated_near.is_empty() {
            for &i in dominated_near.iter().rev() {
                pool.remove(i);
            }
        } else {
            // cheapest member at or above the candidate's cost; the worst
            // member guarantees one exists
            let victim = pool
                .iter()
                .enumerate()
                .filter(|(_, e)| e.cost >= entry.cost)
                .min_by(|(_, a), (_, b)| a.cost.partial_cmp(&b.cost).unwrap())
                .map(|(i, _)| i)
                .expect("a member no better than the candidate exists");
            pool.remove(victim);
        }
        pool.push(entry);
        true
    }

    /// Verify capacity, route-count grouping, feasibility and pairwise
    /// distance of every pool; test support.
    pub fn audit(&self, inst: &Instance) -> Result<(), String> {
        for (&m, pool) in &self.by_routes {
            if pool.len() > self.capacity {
                return Err(format!("pool {m} exceeds capacity: {}", pool.len()));
            }
            for (i, e) in pool.iter().enumerate() {
                if e.solution.route_count() != m {
                    return Err(format!(
                        "pool {m} holds a {}-route member",
                        e.solution.route_count()
                    ));
                }
                if !e.solution.is_feasible(inst) {
                    return Err(format!("pool {m} member {i} infeasible"));
                }
                if (e.cost - e.solution.objective()).abs() > 1e-9 {
                    return Err(format!("pool {m} member {i} stale cost"));
                }
                for other in &pool[i + 1..] {
                    let d = edge_sym_diff(&e.edges, &other.edges) as f64;
                    if d <= self.min_distance {
                        return Err(format!("pool {m} pairwise distance {d} too small"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Greedy maximum-overlap pairing: `mapping[k] = l` matches route `k` of
/// the initial solution with route `l` of the guide. Repeatedly takes the
/// unmatched pair sharing the most customers, ties to the smallest pair of
/// indices.
pub fn pair_routes(initial: &Solution, guide: &Solution) -> Vec<usize> {
    let m = initial.route_count();
    debug_assert_eq!(m, guide.route_count());

    let mut overlap = vec![vec![0usize; m]; m];
    for (l, route) in guide.routes().iter().enumerate() {
        for idx in 1..route.last_index() {
            let v = route.get(idx) as usize;
            if let Some((k, _)) = initial.position(v) {
                overlap[k][l] += 1;
            }
        }
    }

    let mut mapping = vec![usize::MAX; m];
    let mut used_initial = vec![false; m];
    let mut used_guide = vec![false; m];
    for _ in 0..m {
        let (mut bk, mut bl, mut bo) = (usize::MAX, usize::MAX, 0usize);
        let mut found = false;
        for k in 0..m {
            if used_initial[k] {
                continue;
            }
            for l in 0..m {
                if used_guide[l] {
                    continue;
                }
                if !found || overlap[k][l] > bo {
                    (bk, bl, bo) = (k, l, overlap[k][l]);
                    found = true;
                }
            }
        }
        mapping[bk] = bl;
        used_initial[bk] = true;
        used_guide[bl] = true;
    }
    mapping
}

/// One relinking criterion: the subset of origin/destination states whose
/// factors count toward a vertex's priority.
#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: u8,
    active: [bool; 6],
}

impl Criterion {
    const fn new(id: u8, states: &[usize]) -> Criterion {
        let mut active = [false; 6];
        let mut i = 0;
        while i < states.len() {
            active[states[i] - 1] = true;
            i += 1;
        }
        Criterion { id, active }
    }

    pub fn is_active(&self, state: usize) -> bool {
        self.active[state - 1]
    }
}

/// The ten state combinations used during relinking.
pub const CRITERIA: [Criterion; 10] = [
    Criterion::new(1, &[1, 3, 5]),
    Criterion::new(2, &[3]),
    Criterion::new(3, &[1, 3]),
    Criterion::new(4, &[1, 2, 3, 5]),
    Criterion::new(5, &[1, 2, 5]),
    Criterion::new(6, &[1, 2, 3]),
    Criterion::new(7, &[3, 5]),
    Criterion::new(8, &[2, 3, 5]),
    Criterion::new(9, &[2, 3]),
    Criterion::new(10, &[3, 5, 6]),
];

/// Origin-route state from feasibility before and after removing the
/// vertex. Removal never breaks feasibility, so three states cover it.
pub fn origin_state(feasible_before: bool, feasible_after: bool) -> usize {
    match (feasible_before, feasible_after) {
        (false, true) => 1,
        (false, false) => 2,
        (true, true) => 3,
        (true, false) => unreachable!("removing load cannot overload a route"),
    }
}

/// Destination-route state from feasibility before and after receiving the
/// vertex. Insertion never repairs feasibility.
pub fn dest_state(feasible_before: bool, feasible_after: bool) -> usize {
    match (feasible_before, feasible_after) {
        (true, false) => 4,
        (false, false) => 5,
        (true, true) => 6,
        (false, true) => unreachable!("adding load cannot repair a route"),
    }
}

/// Priority of moving a vertex given its origin and destination states:
/// states that help reach feasibility add one, states that hurt subtract
/// one, and states outside the criterion contribute nothing.
pub fn vertex_priority(origin: usize, dest: usize, criterion: &Criterion) -> i32 {
    debug_assert!((1..=3).contains(&origin) && (4..=6).contains(&dest));
    const FACTOR: [i32; 6] = [1, 1, -1, -1, -1, 1];
    let mut p = 0;
    if criterion.is_active(origin) {
        p += FACTOR[origin - 1];
    }
    if criterion.is_active(dest) {
        p += FACTOR[dest - 1];
    }
    p
}

/// Deterministic relinking walk: relocate every vertex of `initial` that
/// sits outside its matched guide route, one per step in order of
/// priority analysis, and harvest the best feasible intermediate. Returns the
/// harvested solution (with empty routes retained) and the number of
/// relocations performed.
pub fn relink_walk(
    initial: &Solution,
    guide: &Solution,
    criterion: &Criterion,
    inst: &Instance,
) -> (Solution, usize) {
    let m = initial.route_count();
    let mapping = pair_routes(initial, guide);
    let mut inverse = vec![usize::MAX; m];
    for (k, &l) in mapping.iter().enumerate() {
        inverse[l] = k;
    }

    let mut work = initial.clone();
    let mut pending: Vec<u32> = Vec::new();
    let mut dest_of = vec![usize::MAX; inst.num_vertices()];
    for c in 1..inst.num_vertices() {
        let (init_route, _) = work.position(c).expect("complete solution");
        let (guide_route, _) = guide.position(c).expect("complete solution");
        dest_of[c] = inverse[guide_route];
        if mapping[init_route] != guide_route {
            pending.push(c as u32);
        }
    }

    let mut best = work.clone();
    let mut best_cost = work.objective();
    let mut steps = 0usize;

    while !pending.is_empty() {
        // priorities under the current loads
        let state_of = |work: &Solution, v: u32| {
            let q = inst.demand(v as usize) as i64;
            let (o_route, _) = work.position(v as usize).unwrap();
            let d_route = dest_of[v as usize];
            let o_slack = work.route(o_route).slack(inst.capacity);
            let d_slack = work.route(d_route).slack(inst.capacity);
            let o = origin_state(o_slack >= 0, o_slack + q >= 0);
            let d = dest_state(d_slack >= 0, d_slack - q >= 0);
            (o, d)
        };
        let mut top = i32::MIN;
        for &v in &pending {
            let (o, d) = state_of(&work, v);
            top = top.max(vertex_priority(o, d, criterion));
        }
        // ties by cheapest relocation, then smallest vertex index
        let mut chosen: Option<(f64, u32)> = None;
        for &v in &pending {
            let (o, d) = state_of(&work, v);
            if vertex_priority(o, d, criterion) != top {
                continue;
            }
            let (o_route, k) = work.position(v as usize).unwrap();
            let verts = work.route(o_route).vertices();
            let removal = inst.distance(verts[k - 1] as usize, verts[k + 1] as usize)
                - inst.distance(verts[k - 1] as usize, v as usize)
                - inst.distance(v as usize, verts[k + 1] as usize);
            let (_, insertion) = best_insert_slot(&work, dest_of[v as usize], v, inst);
            let shift_cost = removal + insertion;
            if chosen.is_none_or(|(c, _)| shift_cost < c - EPS) {
                chosen = Some((shift_cost, v));
            }
        }
        let (_, v) = chosen.expect("pending vertices always yield a candidate");

        let (o_route, k) = work.position(v as usize).unwrap();
        work.remove_at(o_route, k, inst);
        let d_route = dest_of[v as usize];
        let (slot, _) = best_insert_slot(&work, d_route, v, inst);
        work.insert_after(d_route, slot, v, inst);
        pending.retain(|&x| x != v);
        steps += 1;

        if work.is_capacity_feasible(inst) {
            let cost = work.objective();
            if cost < best_cost {
                best = work.clone();
                best_cost = cost;
            }
        }
    }

    (best, steps)
}

/// Relink the given solution against a random member of its elite pool:
/// random role assignment, random criterion, then [`relink_walk`]. The
/// harvested solution is locally optimized and offered back to the pool.
/// With no pool for this route count, returns the input unchanged.
pub fn path_relinking(
    s: &Solution,
    fam: &mut EliteFamily,
    inst: &Instance,
    nd: &NeighborData,
    rng: &mut crate::SolverRng,
) -> Solution {
    let pool = fam.set(s.route_count());
    if pool.is_empty() {
        return s.clone();
    }
    let elite = &pool[rng.gen_range(0..pool.len())];

    let (initial, guide) = if rng.gen_bool(0.5) {
        (s.clone(), elite.solution.clone())
    } else {
        (elite.solution.clone(), s.clone())
    };
    let criterion = CRITERIA[rng.gen_range(0..CRITERIA.len())];

    let (mut best, _) = relink_walk(&initial, &guide, &criterion, inst);
    best.prune_empty_routes();
    neighborhood_search(&mut best, SearchMode::LocalSearch, inst, nd);
    best.prune_empty_routes();
    fam.update(&best);
    best
}

/// Output of a hybrid run, including the final elite pools.
#[derive(Debug, Clone)]
pub struct PrRunResult {
    pub best: Solution,
    pub stats: RunStats,
    pub elite: EliteFamily,
}

/// The full hybrid: iterated local search with degree and acceptance
/// control, feeding every local optimum to the elite pools and relinking
/// it against them. A relinked solution better than the incumbent becomes
/// both the best solution and the new reference.
pub fn run_ails_pr(
    inst: &Instance,
    params: &Params,
    stop: &Stop,
    rng: &mut crate::SolverRng,
) -> PrRunResult {
    let nd = NeighborData::build(inst, params.neighbor_count);
    let mut elite = EliteFamily::new(params.elite_capacity, params.target_distance);

    let result = run_ails_inner(
        inst,
        params,
        stop,
        rng,
        &nd,
        &mut |s, best, reference, rng| {
            elite.update(s);
            let relinked = path_relinking(s, &mut elite, inst, &nd, rng);
            if relinked.objective() < best.objective() - EPS {
                *best = relinked.clone();
                *reference = relinked;
            }
        },
    );

    PrRunResult {
        best: result.best,
        stats: result.stats,
        elite,
    }
}

/// Repair and locally optimize an arbitrary complete solution; used by
/// tests to fabricate pool members.
pub fn polish(s: &mut Solution, inst: &Instance, nd: &NeighborData) {
    repair_and_optimize(s, inst, nd);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_solve;
    use crate::perturb::{construct_initial, perturb, REMOVAL_KINDS};
    use crate::solution::sym_distance;

    /// The published per-pair priority values, rows (origin, dest) in the
    /// order (1,4),(1,5),(1,6),(2,4),(2,5),(2,6),(3,4),(3,5),(3,6),
    /// columns criteria 1..=10.
    const PRIORITY_TABLE: [[i32; 10]; 9] = [
        [1, 0, 1, 1, 1, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 1, -1, -1, 0, -1],
        [1, 0, 1, 1, 1, 1, 0, 0, 0, 1],
        [0, 0, 0, 1, 1, 1, 0, 1, 1, 0],
        [-1, 0, 0, 0, 0, 1, -1, 0, 1, -1],
        [0, 0, 0, 1, 1, 1, 0, 1, 1, 1],
        [-1, -1, -1, -1, 0, -1, -1, -1, -1, -1],
        [-2, -1, -1, -2, -1, -1, -2, -2, -1, -2],
        [-1, -1, -1, -1, 0, -1, -1, -1, -1, 0],
    ];

    #[test]
    fn priority_table_regenerates_exactly() {
        let mut row = 0;
        for origin in 1..=3usize {
            for dest in 4..=6usize {
                for (col, crit) in CRITERIA.iter().enumerate() {
                    assert_eq!(
                        vertex_priority(origin, dest, crit),
                        PRIORITY_TABLE[row][col],
                        "pair ({origin},{dest}) criterion {}",
                        crit.id
                    );
                }
                row += 1;
            }
        }
        assert_eq!(row, 9);
    }

    #[test]
    fn priority_spot_values() {
        assert_eq!(vertex_priority(1, 4, &CRITERIA[0]), 1);
        assert_eq!(vertex_priority(3, 5, &CRITERIA[0]), -2);
        assert_eq!(vertex_priority(3, 6, &CRITERIA[9]), 0);
    }

    fn solution_pool(
        inst: &Instance,
        nd: &NeighborData,
        count: usize,
        seed: u64,
    ) -> Vec<Solution> {
        let mut rng = crate::test_rng(seed);
        let mut base = construct_initial(inst, nd, &mut rng);
        polish(&mut base, inst, nd);
        let mut out = vec![base.clone()];
        while out.len() < count {
            let kind = REMOVAL_KINDS[rng.gen_range(0..3)];
            let mut s = perturb(&base, kind, 6.0, 10, inst, nd, &mut rng);
            polish(&mut s, inst, nd);
            out.push(s.clone());
            if rng.gen_bool(0.3) {
                base = s;
            }
        }
        out
    }

    #[test]
    fn elite_update_inserts_when_empty_and_rejects_near_better() {
        let inst = Instance::random("e", 20, 30, &mut crate::test_rng(1));
        let nd = NeighborData::build(&inst, 10);
        let pool = solution_pool(&inst, &nd, 30, 2);
        let mut fam = EliteFamily::new(5, 4.0);
        assert!(fam.update(&pool[0]));
        assert_eq!(fam.set(pool[0].route_count()).len(), 1);

        // re-offering the same solution: distance 0 to itself, equal cost;
        // the dominated-near branch swaps it for an identical copy
        assert!(fam.update(&pool[0]));
        assert_eq!(fam.set(pool[0].route_count()).len(), 1);
        fam.audit(&inst).unwrap();

        // a strictly worse twin within the distance floor is rejected
        let m = pool[0].route_count();
        let near_worse = pool
            .iter()
            .find(|s| {
                s.route_count() == m
                    && s.objective() > pool[0].objective()
                    && (sym_distance(s, &pool[0]) as f64) <= 4.0
            })
            .cloned();
        if let Some(w) = near_worse {
            assert!(!fam.update(&w));
            fam.audit(&inst).unwrap();
        }
    }

    #[test]
    fn elite_full_pool_keeps_invariants_under_pressure() {
        let inst = Instance::random("f", 24, 30, &mut crate::test_rng(3));
        let nd = NeighborData::build(&inst, 10);
        let pool = solution_pool(&inst, &nd, 120, 4);
        let mut fam = EliteFamily::new(3, 2.0);
        for s in &pool {
            fam.update(s);
            fam.audit(&inst).unwrap();
        }
        assert!(fam.pools().any(|(_, p)| !p.is_empty()));
    }

    #[test]
    fn pair_routes_identity_and_oracle_replay() {
        let inst = Instance::random("p", 18, 25, &mut crate::test_rng(5));
        let nd = NeighborData::build(&inst, 10);
        let pool = solution_pool(&inst, &nd, 12, 6);

        // identical solutions pair each route with itself
        let id = pair_routes(&pool[0], &pool[0]);
        for (k, &l) in id.iter().enumerate() {
            assert_eq!(k, l);
        }

        // greedy replay with an independent implementation
        for pair in pool.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.route_count() != b.route_count() {
                continue;
            }
            let got = pair_routes(a, b);
            let m = a.route_count();
            let members = |s: &Solution, i: usize| -> std::collections::BTreeSet<u32> {
                s.route(i).vertices()[1..s.route(i).last_index()]
                    .iter()
                    .copied()
                    .collect()
            };
            let mut expect = vec![usize::MAX; m];
            let mut left: Vec<usize> = (0..m).collect();
            let mut right: Vec<usize> = (0..m).collect();
            while !left.is_empty() {
                let (mut bk, mut bl, mut bo) = (usize::MAX, usize::MAX, usize::MAX);
                for &k in &left {
                    for &l in &right {
                        let o = members(a, k).intersection(&members(b, l)).count();
                        if bo == usize::MAX || o > bo {
                            (bk, bl, bo) = (k, l, o);
                        }
                    }
                }
                expect[bk] = bl;
                left.retain(|&k| k != bk);
                right.retain(|&l| l != bl);
            }
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn pair_routes_is_bijection() {
        let inst = Instance::random("b", 20, 20, &mut crate::test_rng(7));
        let nd = NeighborData::build(&inst, 10);
        let pool = solution_pool(&inst, &nd, 20, 8);
        for a in &pool {
            for b in &pool {
                if a.route_count() != b.route_count() {
                    continue;
                }
                let mapping = pair_routes(a, b);
                let mut seen = vec![false; mapping.len()];
                for &l in &mapping {
                    assert!(!seen[l], "guide route matched twice");
                    seen[l] = true;
                }
            }
        }
    }

    #[test]
    fn forced_overlap_pairing() {
        // routes share all but one customer with their counterpart
        let inst = Instance::random("o", 8, 100, &mut crate::test_rng(9));
        let a = Solution::from_routes(&inst, &[vec![1, 2, 3, 4], vec![5, 6, 7, 8]]);
        let b = Solution::from_routes(&inst, &[vec![5, 6, 7, 1], vec![2, 3, 4, 8]]);
        let mapping = pair_routes(&a, &b);
        assert_eq!(mapping, vec![1, 0]);
    }

    #[test]
    fn relink_walk_step_count_equals_initial_mismatch() {
        let inst = Instance::random("w", 22, 30, &mut crate::test_rng(15));
        let nd = NeighborData::build(&inst, 10);
        let pool = solution_pool(&inst, &nd, 50, 16);
        let mut rng = crate::test_rng(17);
        let mut walks = 0;
        for a in &pool {
            for b in pool.iter().rev() {
                if a.route_count() != b.route_count() || walks >= 100 {
                    continue;
                }
                walks += 1;
                let criterion = CRITERIA[rng.gen_range(0..CRITERIA.len())];
                let mapping = pair_routes(a, b);
                let mismatch = (1..inst.num_vertices())
                    .filter(|&c| {
                        let (ra, _) = a.position(c).unwrap();
                        let (rb, _) = b.position(c).unwrap();
                        mapping[ra] != rb
                    })
                    .count();
                let (harvest, steps) = relink_walk(a, b, &criterion, &inst);
                assert_eq!(steps, mismatch);
                // the harvest never loses to the walk's starting point
                assert!(harvest.objective() <= a.objective() + 1e-9);
                assert!(harvest.is_feasible(&inst) || sym_distance(&harvest, a) == 0);
            }
        }
        assert_eq!(walks, 100);
    }

    #[test]
    fn relinking_no_pool_returns_input() {
        let inst = Instance::random("r", 15, 25, &mut crate::test_rng(11));
        let nd = NeighborData::build(&inst, 8);
        let mut rng = crate::test_rng(1);
        let mut s = construct_initial(&inst, &nd, &mut rng);
        polish(&mut s, &inst, &nd);
        let mut fam = EliteFamily::new(5, 4.0);
        let out = path_relinking(&s, &mut fam, &inst, &nd, &mut rng);
        assert_eq!(out.objective(), s.objective());
        assert_eq!(sym_distance(&out, &s), 0);
        assert!(fam.pools().next().is_none());
    }

    #[test]
    fn relinking_identical_pair_walks_zero_steps() {
        let inst = Instance::random("q", 15, 25, &mut crate::test_rng(13));
        let nd = NeighborData::build(&inst, 8);
        let mut rng = crate::test_rng(2);
        let mut s = construct_initial(&inst, &nd, &mut rng);
        polish(&mut s, &inst, &nd);
        let (out, steps) = relink_walk(&s, &s, &CRITERIA[0], &inst);
        assert_eq!(steps, 0);
        assert_eq!(sym_distance(&out, &s), 0);
    }

    #[test]
    fn relinking_keeps_elite_sound() {
        let inst = Instance::random("ks", 22, 30, &mut crate::test_rng(19));
        let nd = NeighborData::build(&inst, 10);
        let pool = solution_pool(&inst, &nd, 40, 20);
        let mut fam = EliteFamily::new(6, 3.0);
        for s in &pool {
            fam.update(s);
        }
        fam.audit(&inst).unwrap();
        let mut rng = crate::test_rng(21);
        for s in pool.iter().take(25) {
            let out = path_relinking(s, &mut fam, &inst, &nd, &mut rng);
            assert!(out.is_feasible(&inst));
            fam.audit(&inst).unwrap();
        }
    }

    #[test]
    fn hybrid_reaches_oracle_optimum_on_tiny_instances() {
        let mut failures = Vec::new();
        for seed in 0..10u64 {
            let mut gen = crate::test_rng(700 + seed);
            let n = 5 + (seed % 3) as usize;
            let inst = Instance::random(&format!("h{seed}"), n, 25, &mut gen);
            let exact = exact_solve(&inst).unwrap();
            let got = run_ails_pr(
                &inst,
                &Params::default(),
                &Stop::no_improve(500),
                &mut crate::rng_from_seed(seed),
            );
            assert!(got.best.is_feasible(&inst));
            got.elite.audit(&inst).unwrap();
            if (got.best.objective() - exact.cost).abs() > 1e-9 {
                failures.push((seed, got.best.objective(), exact.cost));
            }
        }
        assert!(failures.is_empty(), "missed optima: {failures:?}");
    }

    #[test]
    fn hybrid_deterministic_under_seed() {
        let inst = Instance::random("hd", 25, 40, &mut crate::test_rng(31));
        let stop = Stop::no_improve(200);
        let a = run_ails_pr(
            &inst,
            &Params::default(),
            &stop,
            &mut crate::rng_from_seed(9),
        );
        let b = run_ails_pr(
            &inst,
            &Params::default(),
            &stop,
            &mut crate::rng_from_seed(9),
        );
        assert_eq!(a.best.to_sol_string(), b.best.to_sol_string());
        assert_eq!(a.stats.iterations, b.stats.iterations);
    }
}
