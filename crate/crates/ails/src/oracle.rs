//! Exact solver for tiny instances, by exhaustive enumeration of customer
//! partitions and route orderings. Ground truth for the heuristic solver.

use crate::instance::Instance;

/// Largest customer count the exact solver accepts.
pub const MAX_EXACT_N: usize = 8;

/// An optimal solution of a tiny instance.
#[derive(Debug, Clone)]
pub struct ExactResult {
    pub cost: f64,
    pub routes: Vec<Vec<u32>>,
}

/// Solve an instance with at most [`MAX_EXACT_N`] customers to optimality.
///
/// Customers are partitioned into capacity-feasible blocks by enumerating
/// restricted-growth strings; each block is priced by scanning vertex
/// permutations, skipping reversed duplicates.
pub fn exact_solve(inst: &Instance) -> Result<ExactResult, String> {
    let n = inst.n;
    if n > MAX_EXACT_N {
        return Err(format!(
            "exact solver is limited to {MAX_EXACT_N} customers, got {n}"
        ));
    }

    let mut labels = vec![0usize; n];
    let mut best_cost = f64::INFINITY;
    let mut best_routes: Vec<Vec<u32>> = Vec::new();

    loop {
        if let Some(blocks) = blocks_if_feasible(inst, &labels) {
            let mut total = 0.0;
            let mut routes = Vec::with_capacity(blocks.len());
            for block in &blocks {
                let (cost, order) = best_tour(inst, block);
                total += cost;
                routes.push(order);
            }
            if total < best_cost {
                best_cost = total;
                best_routes = routes;
            }
        }
        if !next_partition(&mut labels) {
            break;
        }
    }

    Ok(ExactResult {
        cost: best_cost,
        routes: best_routes,
    })
}

/// Group customers by partition label, or `None` when a block violates
/// capacity.
fn blocks_if_feasible(inst: &Instance, labels: &[usize]) -> Option<Vec<Vec<u32>>> {
    let groups = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); groups];
    let mut loads = vec![0u64; groups];
    for (i, &g) in labels.iter().enumerate() {
        let customer = i + 1;
        loads[g] += inst.demand(customer) as u64;
        if loads[g] > inst.capacity as u64 {
            return None;
        }
        blocks[g].push(customer as u32);
    }
    Some(blocks)
}

/// Advance a restricted-growth string to the next set partition; false
/// once all partitions have been visited.
fn next_partition(labels: &mut [usize]) -> bool {
    for i in (1..labels.len()).rev() {
        let cap = labels[..i].iter().copied().max().unwrap_or(0) + 1;
        if labels[i] < cap {
            labels[i] += 1;
            for l in labels[i + 1..].iter_mut() {
                *l = 0;
            }
            return true;
        }
        labels[i] = 0;
    }
    false
}

/// Cheapest depot tour through a block, by permutation scan. Reversed
/// tours cost the same, so only orderings with first vertex below the last
/// are evaluated.
fn best_tour(inst: &Instance, block: &[u32]) -> (f64, Vec<u32>) {
    let mut order: Vec<u32> = block.to_vec();
    let mut best = f64::INFINITY;
    let mut best_order = order.clone();
    permute(&mut order, 0, &mut |perm| {
        if perm.len() > 1 && perm[0] > perm[perm.len() - 1] {
            return;
        }
        let mut cost = inst.distance(0, perm[0] as usize);
        for w in perm.windows(2) {
            cost += inst.distance(w[0] as usize, w[1] as usize);
        }
        cost += inst.distance(perm[perm.len() - 1] as usize, 0);
        if cost < best {
            best = cost;
            best_order = perm.to_vec();
        }
    });
    (best, best_order)
}

fn permute(items: &mut [u32], k: usize, visit: &mut impl FnMut(&[u32])) {
    if k + 1 >= items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::EdgeWeightKind;
    use crate::solution::validate_routes;

    fn mk(coords: Vec<(f64, f64)>, demand: Vec<u32>, cap: u32) -> Instance {
        Instance::new(
            "t".into(),
            coords,
            demand,
            cap,
            EdgeWeightKind::ExactEuclidean,
        )
    }

    #[test]
    fn single_customer() {
        let inst = mk(vec![(0.0, 0.0), (3.0, 4.0)], vec![0, 2], 5);
        let r = exact_solve(&inst).unwrap();
        assert_eq!(r.cost, 10.0);
        assert_eq!(r.routes, vec![vec![1]]);
    }

    #[test]
    fn two_customers_pick_cheaper_structure() {
        let inst = mk(
            vec![(0.0, 0.0), (10.0, 0.0), (20.0, 0.0)],
            vec![0, 2, 2],
            10,
        );
        // single route: 10 + 10 + 20 = 40; two singleton routes: 20 + 40 = 60
        let r = exact_solve(&inst).unwrap();
        assert_eq!(r.cost, 40.0);

        let tight = mk(vec![(0.0, 0.0), (10.0, 0.0), (20.0, 0.0)], vec![0, 2, 2], 3);
        let r = exact_solve(&tight).unwrap();
        assert_eq!(r.cost, 60.0);
    }

    #[test]
    fn refuses_large_instances() {
        let inst = Instance::random("big", 9, 40, &mut crate::test_rng(0));
        assert!(exact_solve(&inst).is_err());
    }

    #[test]
    fn result_is_feasible_and_invariant_under_relabeling() {
        for seed in 0..10u64 {
            let inst = Instance::random("r", 6, 25, &mut crate::test_rng(seed));
            let r = exact_solve(&inst).unwrap();
            assert_eq!(validate_routes(&inst, &r.routes).unwrap(), r.cost);

            // relabel customers by reversing their order
            let nv = inst.num_vertices();
            let mut coords = vec![inst.coord(0)];
            let mut demand = vec![0u32];
            for c in (1..nv).rev() {
                coords.push(inst.coord(c));
                demand.push(inst.demand(c));
            }
            let relabeled = Instance::new(
                "rev".into(),
                coords,
                demand,
                inst.capacity,
                inst.edge_weight_kind,
            );
            let r2 = exact_solve(&relabeled).unwrap();
            assert!(
                (r.cost - r2.cost).abs() < 1e-9,
                "seed {seed}: {} vs {}",
                r.cost,
                r2.cost
            );
        }
    }

    #[test]
    fn optimal_cost_invariant_under_rotation() {
        for seed in 0..5u64 {
            let inst = Instance::random("r", 5, 25, &mut crate::test_rng(seed));
            let base = exact_solve(&inst).unwrap();
            // rotate the plane by 90 degrees: (x, y) -> (-y, x)
            let nv = inst.num_vertices();
            let coords: Vec<(f64, f64)> = (0..nv)
                .map(|v| {
                    let (x, y) = inst.coord(v);
                    (-y, x)
                })
                .collect();
            let demand: Vec<u32> = (0..nv).map(|v| inst.demand(v)).collect();
            let rotated = Instance::new(
                "rot".into(),
                coords,
                demand,
                inst.capacity,
                inst.edge_weight_kind,
            );
            let turned = exact_solve(&rotated).unwrap();
            assert!((base.cost - turned.cost).abs() < 1e-9);
        }
    }

    // Independent re-derivation of the optimum via subset dynamic
    // programming, to guard the partition enumeration itself.
    fn dp_optimum(inst: &Instance) -> f64 {
        let n = inst.n;
        let full = (1usize << n) - 1;
        let mut tour = vec![f64::INFINITY; full + 1];
        for mask in 1..=full {
            let mut load = 0u64;
            let mut block = Vec::new();
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    load += inst.demand(c + 1) as u64;
                    block.push((c + 1) as u32);
                }
            }
            if load <= inst.capacity as u64 {
                tour[mask] = best_tour(inst, &block).0;
            }
        }
        let mut dp = vec![f64::INFINITY; full + 1];
        dp[0] = 0.0;
        for mask in 1..=full {
            // iterate non-empty submasks containing the lowest set bit
            let low = mask & mask.wrapping_neg();
            let mut sub = mask;
            while sub != 0 {
                if sub & low != 0 && tour[sub].is_finite() && dp[mask ^ sub].is_finite() {
                    let cand = dp[mask ^ sub] + tour[sub];
                    if cand < dp[mask] {
                        dp[mask] = cand;
                    }
                }
                sub = (sub - 1) & mask;
            }
        }
        dp[full]
    }

    #[test]
    fn partition_scan_agrees_with_subset_dp() {
        for seed in 20..35u64 {
            let inst = Instance::random("x", 7, 20, &mut crate::test_rng(seed));
            let r = exact_solve(&inst).unwrap();
            let dp = dp_optimum(&inst);
            assert!(
                (r.cost - dp).abs() < 1e-9,
                "seed {seed}: scan {} vs dp {}",
                r.cost,
                dp
            );
        }
    }
}
