//! Problem data: CVRPLIB parsing, distances, and nearest-neighbor tables.

use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

/// How edge costs are derived from coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeWeightKind {
    /// Euclidean length rounded to the nearest integer (CVRPLIB X set).
    RoundedEuclidean,
    /// Exact Euclidean length (CMT / Golden sets).
    ExactEuclidean,
}

/// Immutable problem data. Vertex 0 is always the depot; customers are
/// numbered `1..=n`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    /// Number of customers (the depot is not counted).
    pub n: usize,
    coords: Vec<(f64, f64)>,
    demand: Vec<u32>,
    pub capacity: u32,
    pub edge_weight_kind: EdgeWeightKind,
    /// Best-known solution cost, when one is on record.
    pub bks: Option<f64>,
    /// Precomputed pairwise costs, row-major over all vertices.
    dist: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}: `{text}`")]
    Malformed {
        line: usize,
        msg: String,
        text: String,
    },
    #[error("missing section or field: {0}")]
    Missing(String),
    #[error("line {line}: unsupported EDGE_WEIGHT_TYPE `{text}` (only EUC_2D)")]
    WeightType { line: usize, text: String },
    #[error("line {line}: demand {demand} exceeds capacity {capacity}")]
    DemandOverCapacity {
        line: usize,
        demand: u32,
        capacity: u32,
    },
}

fn malformed(line: usize, msg: impl Into<String>, text: &str) -> ParseError {
    ParseError::Malformed {
        line: line + 1,
        msg: msg.into(),
        text: text.trim().to_string(),
    }
}

impl Instance {
    pub fn new(
        name: String,
        coords: Vec<(f64, f64)>,
        demand: Vec<u32>,
        capacity: u32,
        edge_weight_kind: EdgeWeightKind,
    ) -> Instance {
        assert_eq!(coords.len(), demand.len());
        assert!(coords.len() >= 2, "need a depot and at least one customer");
        assert_eq!(demand[0], 0, "depot demand must be zero");
        let nv = coords.len();
        let mut dist = vec![0.0; nv * nv];
        for i in 0..nv {
            for j in (i + 1)..nv {
                let (xi, yi) = coords[i];
                let (xj, yj) = coords[j];
                let d = ((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt();
                let d = match edge_weight_kind {
                    EdgeWeightKind::RoundedEuclidean => d.round(),
                    EdgeWeightKind::ExactEuclidean => d,
                };
                dist[i * nv + j] = d;
                dist[j * nv + i] = d;
            }
        }
        Instance {
            name,
            n: nv - 1,
            coords,
            demand,
            capacity,
            edge_weight_kind,
            bks: None,
            dist,
        }
    }

    /// Parse a CVRPLIB/TSPLIB-style instance. The depot named in
    /// DEPOT_SECTION is remapped to internal index 0 regardless of its
    /// position in the file.
    ///
    /// The distance mode defaults by instance family: names starting with
    /// `CMT` or `Golden` use exact Euclidean costs, everything else uses the
    /// nearest-integer convention of the X set.
    pub fn parse_cvrplib(text: &str) -> Result<Instance, ParseError> {
        #[derive(PartialEq)]
        enum Section {
            Header,
            Coords,
            Demands,
            Depot,
            Done,
        }

        let mut name = String::new();
        let mut dimension: Option<usize> = None;
        let mut capacity: Option<u32> = None;
        let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
        let mut demands: Vec<Option<u32>> = Vec::new();
        let mut depot: Option<usize> = None;
        let mut section = Section::Header;

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            match line {
                "NODE_COORD_SECTION" => {
                    let dim =
                        dimension.ok_or_else(|| malformed(idx, "DIMENSION must come first", line))?;
                    coords = vec![None; dim];
                    section = Section::Coords;
                    continue;
                }
                "DEMAND_SECTION" => {
                    let dim =
                        dimension.ok_or_else(|| malformed(idx, "DIMENSION must come first", line))?;
                    demands = vec![None; dim];
                    section = Section::Demands;
                    continue;
                }
                "DEPOT_SECTION" => {
                    section = Section::Depot;
                    continue;
                }
                "EOF" => {
                    section = Section::Done;
                    continue;
                }
                _ => {}
            }

            match section {
                Section::Header => {
                    let (key, value) = line
                        .split_once(':')
                        .ok_or_else(|| malformed(idx, "expected `KEY : value` header", line))?;
                    let value = value.trim();
                    match key.trim() {
                        "NAME" => name = value.to_string(),
                        "DIMENSION" => {
                            let d: usize = value
                                .parse()
                                .map_err(|_| malformed(idx, "bad DIMENSION", line))?;
                            if d < 2 {
                                return Err(malformed(idx, "DIMENSION must be at least 2", line));
                            }
                            dimension = Some(d);
                        }
                        "CAPACITY" => {
                            capacity = Some(
                                value
                                    .parse()
                                    .map_err(|_| malformed(idx, "bad CAPACITY", line))?,
                            );
                        }
                        "EDGE_WEIGHT_TYPE" => {
                            if value != "EUC_2D" {
                                return Err(ParseError::WeightType {
                                    line: idx + 1,
                                    text: value.to_string(),
                                });
                            }
                        }
                        // TYPE, COMMENT and friends carry no data we need.
                        _ => {}
                    }
                }
                Section::Coords => {
                    let mut it = line.split_whitespace();
                    let id: usize = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed(idx, "bad node id", line))?;
                    let x: f64 = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed(idx, "bad x coordinate", line))?;
                    let y: f64 = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed(idx, "bad y coordinate", line))?;
                    let slot = coords
                        .get_mut(id.wrapping_sub(1))
                        .ok_or_else(|| malformed(idx, "node id out of range", line))?;
                    *slot = Some((x, y));
                }
                Section::Demands => {
                    let mut it = line.split_whitespace();
                    let id: usize = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed(idx, "bad node id", line))?;
                    let q: u32 = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed(idx, "bad demand", line))?;
                    let cap = capacity.ok_or(ParseError::Missing("CAPACITY".into()))?;
                    if q > cap {
                        return Err(ParseError::DemandOverCapacity {
                            line: idx + 1,
                            demand: q,
                            capacity: cap,
                        });
                    }
                    let slot = demands
                        .get_mut(id.wrapping_sub(1))
                        .ok_or_else(|| malformed(idx, "node id out of range", line))?;
                    *slot = Some(q);
                }
                Section::Depot => {
                    let id: i64 = line
                        .split_whitespace()
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| malformed(idx, "bad depot id", line))?;
                    if id == -1 {
                        section = Section::Done;
                    } else if depot.is_none() {
                        let d = usize::try_from(id)
                            .ok()
                            .filter(|d| (1..=dimension.unwrap_or(0)).contains(d))
                            .ok_or_else(|| malformed(idx, "depot id out of range", line))?;
                        depot = Some(d - 1);
                    } else {
                        return Err(malformed(idx, "multiple depots are not supported", line));
                    }
                }
                Section::Done => {
                    return Err(malformed(idx, "content after EOF", line));
                }
            }
        }

        let dimension = dimension.ok_or(ParseError::Missing("DIMENSION".into()))?;
        let capacity = capacity.ok_or(ParseError::Missing("CAPACITY".into()))?;
        let depot = depot.ok_or(ParseError::Missing("DEPOT_SECTION".into()))?;
        let mut file_coords = Vec::with_capacity(dimension);
        for (i, c) in coords.iter().enumerate() {
            file_coords
                .push(c.ok_or_else(|| ParseError::Missing(format!("coordinates of node {}", i + 1)))?);
        }
        if demands.len() != dimension {
            return Err(ParseError::Missing("DEMAND_SECTION".into()));
        }
        let mut file_demands = Vec::with_capacity(dimension);
        for (i, q) in demands.iter().enumerate() {
            file_demands
                .push(q.ok_or_else(|| ParseError::Missing(format!("demand of node {}", i + 1)))?);
        }
        if file_demands[depot] != 0 {
            return Err(ParseError::Missing(format!(
                "depot node {} must have zero demand",
                depot + 1
            )));
        }
        for (i, &q) in file_demands.iter().enumerate() {
            if i != depot && q == 0 {
                return Err(ParseError::Missing(format!(
                    "customer node {} must have positive demand",
                    i + 1
                )));
            }
        }

        // Remap so the depot sits at index 0 and customers keep file order.
        let mut coords = Vec::with_capacity(dimension);
        let mut demand = Vec::with_capacity(dimension);
        coords.push(file_coords[depot]);
        demand.push(0);
        for i in 0..dimension {
            if i != depot {
                coords.push(file_coords[i]);
                demand.push(file_demands[i]);
            }
        }

        let kind = if name.starts_with("CMT") || name.starts_with("Golden") {
            EdgeWeightKind::ExactEuclidean
        } else {
            EdgeWeightKind::RoundedEuclidean
        };
        Ok(Instance::new(name, coords, demand, capacity, kind))
    }

    /// Render the instance back into CVRPLIB text.
    pub fn to_cvrplib_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : CVRP");
        let _ = writeln!(out, "DIMENSION : {}", self.n + 1);
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
        let _ = writeln!(out, "CAPACITY : {}", self.capacity);
        let _ = writeln!(out, "NODE_COORD_SECTION");
        for (i, (x, y)) in self.coords.iter().enumerate() {
            let _ = writeln!(out, "{} {} {}", i + 1, x, y);
        }
        let _ = writeln!(out, "DEMAND_SECTION");
        for (i, q) in self.demand.iter().enumerate() {
            let _ = writeln!(out, "{} {}", i + 1, q);
        }
        let _ = writeln!(out, "DEPOT_SECTION");
        let _ = writeln!(out, "1");
        let _ = writeln!(out, "-1");
        let _ = writeln!(out, "EOF");
        out
    }

    /// Random instance on an integer grid, for oracle checks and tests.
    /// Demands are uniform in `1..=10`.
    pub fn random(name: &str, n: usize, capacity: u32, rng: &mut impl Rng) -> Instance {
        assert!(capacity >= 10, "capacity must cover the largest demand");
        let mut coords = Vec::with_capacity(n + 1);
        let mut demand = Vec::with_capacity(n + 1);
        coords.push((rng.gen_range(0..=100) as f64, rng.gen_range(0..=100) as f64));
        demand.push(0);
        for _ in 0..n {
            coords.push((rng.gen_range(0..=100) as f64, rng.gen_range(0..=100) as f64));
            demand.push(rng.gen_range(1..=10));
        }
        Instance::new(
            name.to_string(),
            coords,
            demand,
            capacity,
            EdgeWeightKind::RoundedEuclidean,
        )
    }

    /// Rebuild the instance under a different distance convention.
    pub fn with_edge_weight_kind(self, kind: EdgeWeightKind) -> Instance {
        if kind == self.edge_weight_kind {
            return self;
        }
        let mut out = Instance::new(self.name, self.coords, self.demand, self.capacity, kind);
        out.bks = self.bks;
        out
    }

    /// Total number of vertices including the depot.
    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn coord(&self, v: usize) -> (f64, f64) {
        self.coords[v]
    }

    #[inline]
    pub fn demand(&self, v: usize) -> u32 {
        self.demand[v]
    }

    pub fn total_demand(&self) -> u64 {
        self.demand.iter().map(|&q| q as u64).sum()
    }

    /// Cost of traveling between vertices `i` and `j`.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * (self.n + 1) + j]
    }

    /// Lower bound on the number of routes: total demand divided by the
    /// vehicle capacity, rounded up (never below one).
    pub fn min_routes(&self) -> usize {
        let total = self.total_demand();
        let m = total.div_ceil(self.capacity as u64) as usize;
        m.max(1)
    }
}

/// Nearest-neighbor tables: per-vertex sorted neighbor lists truncated to
/// the configured length, plus the full closeness-rank table.
#[derive(Debug, Clone)]
pub struct NeighborData {
    near: Vec<Vec<u32>>,
    /// `rank[v][u]` is the 1-based position of `u` in the by-distance
    /// ordering of all vertices other than `v`; `rank[v][v]` is 0.
    rank: Vec<Vec<u16>>,
}

impl NeighborData {
    /// Build neighbor lists of length `min(count, n)` per vertex. Ties in
    /// distance are broken by ascending vertex index so the tables are
    /// deterministic.
    pub fn build(inst: &Instance, count: usize) -> NeighborData {
        assert!(count >= 1, "neighbor count must be at least 1");
        let nv = inst.num_vertices();
        assert!(nv <= u16::MAX as usize, "rank table uses u16 indices");
        let keep = count.min(inst.n);
        let mut near = Vec::with_capacity(nv);
        let mut rank = Vec::with_capacity(nv);
        let mut order: Vec<u32> = Vec::with_capacity(nv - 1);
        for v in 0..nv {
            order.clear();
            order.extend((0..nv as u32).filter(|&u| u as usize != v));
            order.sort_by(|&a, &b| {
                inst.distance(v, a as usize)
                    .partial_cmp(&inst.distance(v, b as usize))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let mut ranks = vec![0u16; nv];
            for (pos, &u) in order.iter().enumerate() {
                ranks[u as usize] = (pos + 1) as u16;
            }
            near.push(order[..keep].to_vec());
            rank.push(ranks);
        }
        NeighborData { near, rank }
    }

    /// The nearest vertices to `v`, closest first.
    #[inline]
    pub fn near(&self, v: usize) -> &[u32] {
        &self.near[v]
    }

    /// 1-based closeness rank of `u` relative to `v`.
    #[inline]
    pub fn rank(&self, v: usize, u: usize) -> u16 {
        debug_assert_ne!(v, u);
        self.rank[v][u]
    }
}
