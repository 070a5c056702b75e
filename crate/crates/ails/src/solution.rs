//! Solutions as route sets with constant-time vertex lookup and cached
//! per-route loads and costs.

use std::fmt::Write as _;

use thiserror::Error;

use crate::instance::{Instance, NeighborData};

/// A single route: a closed walk starting and ending at the depot.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    /// Vertex sequence including both depot endpoints.
    vertices: Vec<u32>,
    /// Sum of member demands.
    pub load: u32,
    /// Sum of consecutive edge costs.
    pub cost: f64,
    /// `prefix_load[k]` is the demand carried up to and including position
    /// `k`; used to price tail exchanges without materializing them.
    prefix_load: Vec<u32>,
}

impl Route {
    fn empty() -> Route {
        Route {
            vertices: vec![0, 0],
            load: 0,
            cost: 0.0,
            prefix_load: vec![0, 0],
        }
    }

    fn from_customers(customers: &[u32], inst: &Instance) -> Route {
        let mut vertices = Vec::with_capacity(customers.len() + 2);
        vertices.push(0);
        vertices.extend_from_slice(customers);
        vertices.push(0);
        let mut r = Route {
            vertices,
            load: 0,
            cost: 0.0,
            prefix_load: Vec::new(),
        };
        r.refresh(inst);
        r
    }

    /// Recompute load, cost and prefix loads from the vertex sequence.
    fn refresh(&mut self, inst: &Instance) {
        let mut cost = 0.0;
        let mut load = 0u32;
        self.prefix_load.clear();
        self.prefix_load.reserve(self.vertices.len());
        for (i, &v) in self.vertices.iter().enumerate() {
            load += inst.demand(v as usize);
            self.prefix_load.push(load);
            if i + 1 < self.vertices.len() {
                cost += inst.distance(v as usize, self.vertices[i + 1] as usize);
            }
        }
        self.load = load;
        self.cost = cost;
    }

    #[inline]
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Sequence length counting one depot, i.e. position of the final depot.
    #[inline]
    pub fn last_index(&self) -> usize {
        self.vertices.len() - 1
    }

    #[inline]
    pub fn customer_count(&self) -> usize {
        self.vertices.len() - 2
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 2
    }

    #[inline]
    pub fn get(&self, k: usize) -> u32 {
        self.vertices[k]
    }

    /// Demand carried by the suffix strictly after position `k`.
    #[inline]
    pub fn tail_load(&self, k: usize) -> u32 {
        self.load - self.prefix_load[k]
    }

    /// Remaining capacity; negative when the route is overloaded.
    #[inline]
    pub fn slack(&self, capacity: u32) -> i64 {
        capacity as i64 - self.load as i64
    }
}

/// Remaining capacity of a route under the given capacity limit.
pub fn slack(route: &Route, capacity: u32) -> i64 {
    route.slack(capacity)
}

/// A (possibly partial) solution. Customers missing from every route are
/// tracked by the caller in a removal pool; the position table marks them
/// unassigned.
#[derive(Debug, Clone)]
pub struct Solution {
    routes: Vec<Route>,
    /// Customer -> (route index, position) or `None` while removed.
    pos: Vec<Option<(u32, u32)>>,
}

impl Solution {
    /// `route_count` empty routes, every customer unassigned.
    pub fn empty(inst: &Instance, route_count: usize) -> Solution {
        Solution {
            routes: (0..route_count).map(|_| Route::empty()).collect(),
            pos: vec![None; inst.num_vertices()],
        }
    }

    /// Build a solution from explicit customer sequences (used by tests and
    /// the solution checker). Panics on out-of-range or duplicate vertices.
    pub fn from_routes(inst: &Instance, routes: &[Vec<u32>]) -> Solution {
        let mut s = Solution {
            routes: routes
                .iter()
                .map(|r| Route::from_customers(r, inst))
                .collect(),
            pos: vec![None; inst.num_vertices()],
        };
        for i in 0..s.routes.len() {
            s.reindex_route(i);
        }
        let assigned = s.pos[1..].iter().filter(|p| p.is_some()).count();
        let listed: usize = routes.iter().map(|r| r.len()).sum();
        assert_eq!(assigned, listed, "duplicate or depot vertex in route list");
        s
    }

    #[inline]
    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    #[inline]
    pub fn route(&self, i: usize) -> &Route {
        &self.routes[i]
    }

    #[inline]
    pub fn route_count(&self) -> usize {
        self.routes.len()
    }

    /// Location of a customer, or `None` while it sits in a removal pool.
    #[inline]
    pub fn position(&self, customer: usize) -> Option<(usize, usize)> {
        self.pos[customer].map(|(r, k)| (r as usize, k as usize))
    }

    /// Total cost over all routes.
    pub fn objective(&self) -> f64 {
        self.routes.iter().map(|r| r.cost).sum()
    }

    /// True when every route respects capacity and every customer is
    /// assigned to exactly one route.
    pub fn is_feasible(&self, inst: &Instance) -> bool {
        self.is_capacity_feasible(inst) && self.pos[1..].iter().all(|p| p.is_some())
    }

    /// Capacity check alone; ignores unassigned customers.
    pub fn is_capacity_feasible(&self, inst: &Instance) -> bool {
        self.routes.iter().all(|r| r.slack(inst.capacity) >= 0)
    }

    /// Total violation of the load constraints (zero when capacity-feasible).
    pub fn total_overload(&self, inst: &Instance) -> i64 {
        self.routes
            .iter()
            .map(|r| (-r.slack(inst.capacity)).max(0))
            .sum()
    }

    fn reindex_route(&mut self, i: usize) {
        let route = &self.routes[i];
        for k in 1..route.vertices.len() - 1 {
            self.pos[route.vertices[k] as usize] = Some((i as u32, k as u32));
        }
    }

    /// Insert `v` immediately after position `slot` of route `i`.
    pub fn insert_after(&mut self, i: usize, slot: usize, v: u32, inst: &Instance) {
        debug_assert!(slot < self.routes[i].last_index());
        self.routes[i].vertices.insert(slot + 1, v);
        self.routes[i].refresh(inst);
        self.reindex_route(i);
    }

    /// Remove the customer at position `k` of route `i`.
    pub fn remove_at(&mut self, i: usize, k: usize, inst: &Instance) -> u32 {
        debug_assert!(k >= 1 && k < self.routes[i].last_index());
        let v = self.routes[i].vertices.remove(k);
        self.pos[v as usize] = None;
        self.routes[i].refresh(inst);
        self.reindex_route(i);
        v
    }

    /// Exchange the customers at position `k` of route `i` and position `l`
    /// of route `j`. The routes may coincide.
    pub fn swap_vertices(&mut self, i: usize, k: usize, j: usize, l: usize, inst: &Instance) {
        debug_assert!(k >= 1 && k < self.routes[i].last_index());
        debug_assert!(l >= 1 && l < self.routes[j].last_index());
        let a = self.routes[i].vertices[k];
        let b = self.routes[j].vertices[l];
        self.routes[i].vertices[k] = b;
        self.routes[j].vertices[l] = a;
        self.routes[i].refresh(inst);
        self.reindex_route(i);
        if i != j {
            self.routes[j].refresh(inst);
            self.reindex_route(j);
        }
    }

    /// Exchange the suffixes after positions `k` of route `i` and `l` of
    /// route `j`.
    pub fn exchange_tails(&mut self, i: usize, k: usize, j: usize, l: usize, inst: &Instance) {
        debug_assert_ne!(i, j);
        let tail_i: Vec<u32> = self.routes[i].vertices.split_off(k + 1);
        let tail_j: Vec<u32> = self.routes[j].vertices.split_off(l + 1);
        self.routes[i].vertices.extend(tail_j);
        self.routes[j].vertices.extend(tail_i);
        self.routes[i].refresh(inst);
        self.routes[j].refresh(inst);
        self.reindex_route(i);
        self.reindex_route(j);
    }

    /// Reverse the segment `from..=to` of route `i`.
    pub fn reverse_segment(&mut self, i: usize, from: usize, to: usize, inst: &Instance) {
        debug_assert!(from >= 1 && to < self.routes[i].last_index() && from <= to);
        self.routes[i].vertices[from..=to].reverse();
        self.routes[i].refresh(inst);
        self.reindex_route(i);
    }

    pub fn push_empty_route(&mut self) {
        self.routes.push(Route::empty());
    }

    /// Remove route `i`, returning its customers. Positions of customers in
    /// later routes are reindexed.
    pub fn take_route(&mut self, i: usize) -> Vec<u32> {
        let route = self.routes.remove(i);
        let customers: Vec<u32> = route.vertices[1..route.vertices.len() - 1].to_vec();
        for &c in &customers {
            self.pos[c as usize] = None;
        }
        for r in i..self.routes.len() {
            self.reindex_route(r);
        }
        customers
    }

    /// Drop all empty routes.
    pub fn prune_empty_routes(&mut self) {
        if self.routes.iter().any(|r| r.is_empty()) {
            self.routes.retain(|r| !r.is_empty());
            for i in 0..self.routes.len() {
                self.reindex_route(i);
            }
        }
    }

    /// Customers currently placed in some route, in index order.
    pub fn assigned_customers(&self) -> Vec<u32> {
        self.pos
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, p)| p.is_some())
            .map(|(c, _)| c as u32)
            .collect()
    }

    /// Undirected edge set of the solution, sorted and deduplicated. A
    /// single-customer route contributes its depot edge once.
    pub fn edge_set(&self) -> Vec<(u32, u32)> {
        let mut edges = Vec::new();
        for route in &self.routes {
            for w in route.vertices.windows(2) {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                if a != b {
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Full integrity check of the cached bookkeeping; test support.
    pub fn audit(&self, inst: &Instance) -> Result<(), String> {
        let mut seen = vec![false; inst.num_vertices()];
        for (i, route) in self.routes.iter().enumerate() {
            let verts = &route.vertices;
            if verts.len() < 2 || verts[0] != 0 || *verts.last().unwrap() != 0 {
                return Err(format!("route {i} is not depot-delimited: {verts:?}"));
            }
            let mut fresh = route.clone();
            fresh.refresh(inst);
            if fresh.load != route.load {
                return Err(format!("route {i} load {} != {}", route.load, fresh.load));
            }
            if (fresh.cost - route.cost).abs() > 1e-9 {
                return Err(format!("route {i} cost {} != {}", route.cost, fresh.cost));
            }
            if fresh.prefix_load != route.prefix_load {
                return Err(format!("route {i} stale prefix loads"));
            }
            for (k, &v) in verts.iter().enumerate().skip(1).take(verts.len() - 2) {
                if v == 0 {
                    return Err(format!("route {i} contains an interior depot"));
                }
                if seen[v as usize] {
                    return Err(format!("customer {v} appears twice"));
                }
                seen[v as usize] = true;
                if self.pos[v as usize] != Some((i as u32, k as u32)) {
                    return Err(format!(
                        "position table for {v} is {:?}, expected ({i},{k})",
                        self.pos[v as usize]
                    ));
                }
            }
        }
        for c in 1..inst.num_vertices() {
            if !seen[c] && self.pos[c].is_some() {
                return Err(format!("customer {c} marked assigned but absent"));
            }
        }
        Ok(())
    }

    /// Customer sequences of the non-empty routes, without depot sentinels.
    pub fn customer_routes(&self) -> Vec<Vec<u32>> {
        self.routes
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| r.vertices[1..r.vertices.len() - 1].to_vec())
            .collect()
    }

    /// Render in CVRPLIB `.sol` style.
    pub fn to_sol_string(&self) -> String {
        let mut out = String::new();
        let mut k = 0;
        for route in &self.routes {
            if route.is_empty() {
                continue;
            }
            k += 1;
            let _ = write!(out, "Route #{k}:");
            for &v in &route.vertices[1..route.vertices.len() - 1] {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        let cost = self.objective();
        if cost.fract() == 0.0 {
            let _ = writeln!(out, "Cost {}", cost as i64);
        } else {
            let _ = writeln!(out, "Cost {cost}");
        }
        out
    }
}

/// Cardinality of the symmetric difference of the two solutions' edge sets.
pub fn sym_distance(a: &Solution, b: &Solution) -> usize {
    let ea = a.edge_set();
    let eb = b.edge_set();
    let mut common = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < ea.len() && j < eb.len() {
        match ea[i].cmp(&eb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    ea.len() + eb.len() - 2 * common
}

/// Relative closeness of `v` to the customers of a route: the mean of the
/// `depth` smallest closeness ranks among the route's customers other than
/// `v` itself. A route with no other customer scores the worst value `n` so
/// it is never preferred.
pub fn proximity_index(
    v: usize,
    depth: usize,
    route: &Route,
    nd: &NeighborData,
    n: usize,
) -> f64 {
    debug_assert!(depth >= 1);
    let mut ranks: Vec<u16> = route.vertices[1..route.vertices.len() - 1]
        .iter()
        .filter(|&&u| u as usize != v)
        .map(|&u| nd.rank(v, u as usize))
        .collect();
    if ranks.is_empty() {
        return n as f64;
    }
    let take = depth.min(ranks.len());
    ranks.sort_unstable();
    let sum: u64 = ranks[..take].iter().map(|&r| r as u64).sum();
    sum as f64 / take as f64
}

/// Percentage excess of `cost` over a best-known value.
pub fn gap(cost: f64, bks: f64) -> f64 {
    100.0 * (cost - bks) / bks
}

#[derive(Debug, Error, PartialEq)]
pub enum SolFileError {
    #[error("line {line}: malformed route line: `{text}`")]
    Malformed { line: usize, text: String },
    #[error("missing `Cost` line")]
    MissingCost,
}

/// Parse `.sol` text into route vertex lists plus the declared cost.
pub fn parse_sol(text: &str) -> Result<(Vec<Vec<u32>>, f64), SolFileError> {
    let mut routes = Vec::new();
    let mut cost = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("Route #") {
            let (_, verts) = rest.split_once(':').ok_or(SolFileError::Malformed {
                line: idx + 1,
                text: line.to_string(),
            })?;
            let route: Result<Vec<u32>, _> =
                verts.split_whitespace().map(|t| t.parse::<u32>()).collect();
            routes.push(route.map_err(|_| SolFileError::Malformed {
                line: idx + 1,
                text: line.to_string(),
            })?);
        } else if let Some(rest) = line.strip_prefix("Cost") {
            cost = rest.trim().parse::<f64>().ok();
        }
    }
    Ok((routes, cost.ok_or(SolFileError::MissingCost)?))
}

/// First violation found when checking explicit routes against an instance.
#[derive(Debug, Error, PartialEq)]
pub enum RouteViolation {
    #[error("vertex {0} is out of range")]
    UnknownVertex(u32),
    #[error("customer {0} appears more than once")]
    Duplicate(u32),
    #[error("customer {0} is not visited")]
    Missing(u32),
    #[error("route {route} load {load} exceeds capacity {capacity}")]
    Overloaded { route: usize, load: u64, capacity: u32 },
}

/// Validate coverage, uniqueness and capacity of explicit routes; returns
/// the recomputed total cost.
pub fn validate_routes(inst: &Instance, routes: &[Vec<u32>]) -> Result<f64, RouteViolation> {
    let mut seen = vec![false; inst.num_vertices()];
    let mut cost = 0.0;
    for (ri, route) in routes.iter().enumerate() {
        let mut load = 0u64;
        let mut prev = 0usize;
        for &v in route {
            if v == 0 || v as usize >= inst.num_vertices() {
                return Err(RouteViolation::UnknownVertex(v));
            }
            if seen[v as usize] {
                return Err(RouteViolation::Duplicate(v));
            }
            seen[v as usize] = true;
            load += inst.demand(v as usize) as u64;
            cost += inst.distance(prev, v as usize);
            prev = v as usize;
        }
        cost += inst.distance(prev, 0);
        if load > inst.capacity as u64 {
            return Err(RouteViolation::Overloaded {
                route: ri + 1,
                load,
                capacity: inst.capacity,
            });
        }
    }
    for c in 1..inst.num_vertices() {
        if !seen[c] {
            return Err(RouteViolation::Missing(c as u32));
        }
    }
    Ok(cost)
}
