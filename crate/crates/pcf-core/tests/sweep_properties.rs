//! Planner-level properties: per-candidate sensor bounds, cycle length
//! bounds, and the factor-5 guarantee against the certified lower bound.

use pcf_core::instance::{generate_random_connected, metric_closure, SplitMix64};
use pcf_core::num::Num;
use pcf_core::oracle::sweep_lower_bound;
use pcf_core::sweep::{
    enumerate_candidates, plan_sweep_cover, tree_to_cycle, verify_plan, Deployment, SweepInstance,
};

fn random_metric(seed: u64, n: usize) -> SweepInstance {
    let raw = generate_random_connected(seed, n, n, 12, 9).unwrap();
    let (closed, _) = metric_closure(&raw).unwrap();
    let mut rng = SplitMix64::new(seed ^ 0xfeed);
    SweepInstance::new(
        closed,
        Num::from_u64(1 + rng.next_below(3)),
        Num::from_u64(1 + rng.next_below(3)),
        Num::from_u64(1 + rng.next_below(11)),
    )
    .unwrap()
}

#[test]
fn candidate_sensor_counts_respect_the_doubling_bound() {
    // n_K <= 2·w(F_K)/(a·t) + K for every candidate K.
    for seed in 0..25 {
        let si = random_metric(seed, 2 + (seed as usize % 6));
        let at = &si.speed * &si.period;
        for cand in enumerate_candidates(&si).unwrap() {
            let weight = cand.forest.weight_in(&si.instance);
            let lhs = &Num::from_u64(cand.sensors as u64) * &at;
            let rhs = &(&Num::from_int(2) * &weight) + &(&Num::from_u64(cand.k as u64) * &at);
            assert!(lhs <= rhs, "seed {seed} K {}: {lhs:?} > {rhs:?}", cand.k);
        }
    }
}

#[test]
fn every_emitted_cycle_is_at_most_twice_its_tree() {
    for seed in 0..25 {
        let si = random_metric(seed + 100, 3 + (seed as usize % 5));
        for cand in enumerate_candidates(&si).unwrap() {
            for comp in cand.forest.components() {
                if comp.spanned().len() >= 2 {
                    let (_, length) = tree_to_cycle(&si, &comp).unwrap();
                    assert!(
                        length <= Num::from_int(2) * comp.weight_in(&si.instance),
                        "seed {seed} K {}",
                        cand.k
                    );
                }
            }
        }
    }
}

#[test]
fn planner_is_five_lmp_against_the_certified_lower_bound() {
    let five = Num::from_int(5);
    for seed in 0..30 {
        let si = random_metric(seed + 300, 2 + (seed as usize % 7));
        let plan = plan_sweep_cover(&si).unwrap();
        assert!(verify_plan(&si, &plan).unwrap().pass, "seed {seed}");
        let lb = sweep_lower_bound(&si).unwrap();
        let sensors: usize = plan
            .groups
            .iter()
            .map(|g| match g {
                Deployment::Stationed { .. } => 1,
                Deployment::Patrol { sensors, .. } => *sensors,
            })
            .sum();
        let uncovered_pi: Num = plan
            .uncovered
            .iter()
            .map(|&l| {
                si.instance
                    .penalty(si.instance.id_of_label(l).unwrap())
                    .clone()
            })
            .sum();
        let lhs = &(&si.sensor_cost * &Num::from_u64(sensors as u64)) + &(&five * &uncovered_pi);
        let rhs = &five * &lb.value;
        assert!(
            lhs <= rhs,
            "seed {seed}: c·|S|+5·pi = {lhs:?} > 5·LB = {rhs:?}"
        );
    }
}

#[test]
fn selection_scores_drive_the_choice() {
    for seed in 0..10 {
        let si = random_metric(seed + 800, 5);
        let candidates = enumerate_candidates(&si).unwrap();
        let plan = plan_sweep_cover(&si).unwrap();
        let best = candidates
            .iter()
            .min_by(|a, b| {
                a.selection_score
                    .cmp(&b.selection_score)
                    .then(a.k.cmp(&b.k))
            })
            .unwrap();
        assert_eq!(plan.k_hat, best.k, "seed {seed}");
    }
}

/// The certified lower bound must under-cut every feasible deployment, not
/// just the planner's: enumerate all deployments of tiny instances (every
/// covered set, every partition into groups, singleton groups stationed and
/// larger ones patrolled in any vertex order) and compare.
#[test]
fn lower_bound_undercuts_every_enumerated_plan() {
    fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let first = items[0];
        let rest = &items[1..];
        let mut out = Vec::new();
        for mut p in partitions(rest) {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(first);
                out.push(q);
            }
            p.push(vec![first]);
            out.push(p);
        }
        out
    }

    for seed in 0..12u64 {
        let n = 2 + (seed as usize % 3); // 2..=4
        let raw = generate_random_connected(seed + 900, n, n, 9, 7).unwrap();
        let (closed, _) = metric_closure(&raw).unwrap();
        let mut rng = SplitMix64::new(seed);
        let si = SweepInstance::new(
            closed,
            Num::from_u64(1 + rng.next_below(2)),
            Num::from_u64(1 + rng.next_below(2)),
            Num::from_u64(1 + rng.next_below(6)),
        )
        .unwrap();
        let lb = sweep_lower_bound(&si).unwrap();
        let at = &si.speed * &si.period;

        for mask in 0usize..(1 << n) {
            let covered: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            let penalty: Num = (0..n)
                .filter(|v| mask >> v & 1 == 0)
                .map(|v| si.instance.penalty(v).clone())
                .sum();
            for blocks in partitions(&covered) {
                let mut sensors = 0usize;
                for block in &blocks {
                    if block.len() == 1 {
                        sensors += 1;
                    } else {
                        // Patrol the block in index order.
                        let mut len = Num::zero();
                        for i in 0..block.len() {
                            len += &si.distance(block[i], block[(i + 1) % block.len()]);
                        }
                        sensors += (len / at.clone()).ceil_to_usize().max(1);
                    }
                }
                let objective = &(&si.sensor_cost * &Num::from_u64(sensors as u64)) + &penalty;
                assert!(
                    lb.value <= objective,
                    "seed {seed} mask {mask:b}: LB {:?} > plan {:?}",
                    lb.value,
                    objective
                );
            }
        }
    }
}
