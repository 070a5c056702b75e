//! Integration checks against the bundled CVRPLIB benchmark files.

use ails::solution::{parse_sol, validate_routes};
use ails::{EdgeWeightKind, Instance, NeighborData};

fn data(file: &str) -> String {
    let path = format!("{}/../../data/{file}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}"))
}

#[test]
fn x_n101_k25_parses_with_expected_shape() {
    let inst = Instance::parse_cvrplib(&data("X-n101-k25.vrp")).unwrap();
    assert_eq!(inst.name, "X-n101-k25");
    assert_eq!(inst.n, 100);
    assert_eq!(inst.capacity, 206);
    assert_eq!(inst.edge_weight_kind, EdgeWeightKind::RoundedEuclidean);
}

#[test]
fn x_n101_k25_min_routes_from_raw_demands() {
    // independent demand sum straight off the file text
    let text = data("X-n101-k25.vrp");
    let mut in_demand = false;
    let mut total: u64 = 0;
    let mut capacity: u64 = 0;
    for line in text.lines() {
        let line = line.trim();
        if let Some(v) = line.strip_prefix("CAPACITY") {
            capacity = v.trim_start_matches([':', ' ', '\t']).trim().parse().unwrap();
        }
        match line {
            "DEMAND_SECTION" => {
                in_demand = true;
                continue;
            }
            "DEPOT_SECTION" => in_demand = false,
            _ => {}
        }
        if in_demand {
            let mut it = line.split_whitespace();
            let (Some(_), Some(q)) = (it.next(), it.next()) else {
                continue;
            };
            total += q.parse::<u64>().unwrap();
        }
    }
    let expected = total.div_ceil(capacity) as usize;
    assert_eq!(expected, 25, "demand sum {total} over capacity {capacity}");

    let inst = Instance::parse_cvrplib(&text).unwrap();
    assert_eq!(inst.min_routes(), expected);
}

#[test]
fn published_solutions_revalidate_at_published_costs() {
    for (vrp, sol, cost) in [
        ("X-n101-k25.vrp", "X-n101-k25.sol", 27591.0),
        ("X-n157-k13.vrp", "X-n157-k13.sol", 16876.0),
    ] {
        let inst = Instance::parse_cvrplib(&data(vrp)).unwrap();
        let (routes, declared) = parse_sol(&data(sol)).unwrap();
        let recomputed = validate_routes(&inst, &routes).unwrap();
        assert_eq!(recomputed, cost, "{vrp}");
        assert_eq!(declared, cost, "{vrp}");
    }
}

#[test]
fn cmt1_uses_exact_distances() {
    let inst = Instance::parse_cvrplib(&data("CMT1.vrp")).unwrap();
    assert_eq!(inst.name, "CMT1");
    assert_eq!(inst.n, 50);
    assert_eq!(inst.capacity, 160);
    assert_eq!(inst.edge_weight_kind, EdgeWeightKind::ExactEuclidean);
    assert_eq!(inst.min_routes(), 5);
    // distances keep their fractional part
    let frac = (0..inst.num_vertices())
        .flat_map(|i| (0..inst.num_vertices()).map(move |j| (i, j)))
        .any(|(i, j)| inst.distance(i, j).fract() != 0.0);
    assert!(frac);
}

#[test]
fn neighbor_tables_on_benchmark_scale() {
    let inst = Instance::parse_cvrplib(&data("X-n157-k13.vrp")).unwrap();
    let nd = NeighborData::build(&inst, 60);
    for v in 0..inst.num_vertices() {
        assert_eq!(nd.near(v).len(), 60);
        let mut prev = -1.0;
        for &u in nd.near(v) {
            let d = inst.distance(v, u as usize);
            assert!(d >= prev);
            prev = d;
        }
        assert_eq!(nd.rank(v, nd.near(v)[0] as usize), 1);
    }
}
