//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). The expected values come from
//! independent oracles implemented in this file, not from the library
//! paths they check.

use std::collections::BTreeSet;
use std::time::Instant;

use paratop::parabase::{
    check_base_axioms, member_na, member_nf, min_nbhd_trace, Certificate, ConjugatedGenerator,
    MembershipVerdict, Obstruction,
};
use paratop::space::{enumerate_spaces, indiscrete, FiniteSpace, Point};
use paratop::verify::run_suite;
use paratop::words::{AbelianVector, FreeWord};

/// Counts families of subsets of an `n`-set that contain the empty set
/// and the full set and are closed under pairwise union and intersection,
/// by scanning all assignments of the proper nonempty subsets. Never
/// touches the preorder enumeration it is checking.
fn topology_count_oracle(n: usize) -> usize {
    let full: u32 = (1u32 << n) - 1;
    let proper: Vec<u32> = (1..full).collect();
    let m = proper.len();
    let mut count = 0usize;
    for choice in 0u64..(1u64 << m) {
        let mut family: Vec<u32> = vec![0, full];
        for (i, &s) in proper.iter().enumerate() {
            if choice & (1u64 << i) != 0 {
                family.push(s);
            }
        }
        let closed = family.iter().enumerate().all(|(i, &a)| {
            family[i + 1..]
                .iter()
                .all(|&b| family.contains(&(a | b)) && family.contains(&(a & b)))
        });
        if closed {
            count += 1;
        }
    }
    count
}

#[test]
fn criterion_1_enumeration_fidelity() {
    let started = Instant::now();
    let expected = [1usize, 4, 29, 355];
    for (i, &want) in expected.iter().enumerate() {
        let n = i + 1;
        let got = enumerate_spaces(n).unwrap().count();
        assert_eq!(got, want, "labeled topology count for n = {n}");
        assert_eq!(topology_count_oracle(n), want, "oracle count for n = {n}");
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "enumeration took {elapsed:?}, budget 10 s"
    );
    println!(
        "criterion 1 (enumeration fidelity 1/4/29/355 vs closure-family oracle, {:.2}s): PASS",
        elapsed.as_secs_f64()
    );
}

/// Every zero-sum vector on a 3-point carrier with ℓ1-norm ≤ 6, as raw
/// coefficient triples.
fn zero_sum_grid() -> Vec<[i64; 3]> {
    let mut grid = Vec::new();
    for a in -6i64..=6 {
        for b in -6i64..=6 {
            let c = -(a + b);
            if a.abs() + b.abs() + c.abs() <= 6 {
                grid.push([a, b, c]);
            }
        }
    }
    grid
}

/// Brute-force N_A membership: all sums of at most 6 generator
/// differences. A representable vector of norm ≤ 6 has a cycle-free
/// representation splitting into at most norm/2 ≤ 3 unit paths, each at
/// most 2 arcs long on a 3-node digraph, so 6 arc uses always suffice.
fn brute_force_members(space: &FiniteSpace) -> BTreeSet<[i64; 3]> {
    let arcs = space.specialization_arcs();
    let mut reachable = BTreeSet::new();
    fn extend(
        arcs: &[(usize, usize)],
        from_arc: usize,
        budget: usize,
        current: [i64; 3],
        out: &mut BTreeSet<[i64; 3]>,
    ) {
        out.insert(current);
        if budget == 0 {
            return;
        }
        for (k, &(x, y)) in arcs.iter().enumerate().skip(from_arc) {
            let mut next = current;
            next[x] -= 1;
            next[y] += 1;
            extend(arcs, k, budget - 1, next, out);
        }
    }
    extend(&arcs, 0, 6, [0, 0, 0], &mut reachable);
    reachable
}

#[test]
fn criterion_2_membership_oracle_equivalence() {
    let started = Instant::now();
    let grid = zero_sum_grid();
    let mut agreements = 0usize;
    for space in enumerate_spaces(3).unwrap() {
        let oracle = brute_force_members(&space);
        for coords in &grid {
            let v = AbelianVector::from_coeffs(
                coords
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (space.point(i).clone(), c)),
            );
            let verdict = member_na(&space, &v).unwrap();
            let expected = oracle.contains(coords);
            assert_eq!(
                verdict.is_member(),
                expected,
                "flow vs brute force on {v} over {}",
                space.to_json()
            );
            if let MembershipVerdict::Member { certificate } = &verdict {
                assert!(certificate.reconstructs_vector(&v));
            }
            agreements += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "oracle comparison took {elapsed:?}, budget 60 s"
    );
    println!(
        "criterion 2 (flow membership vs brute force, {agreements} queries, {:.2}s): PASS",
        elapsed.as_secs_f64()
    );
}

fn suite_check<'a>(
    report: &'a paratop::verify::SuiteReport,
    tag: &str,
) -> &'a paratop::verify::CheckSummary {
    report
        .checks
        .iter()
        .find(|c| c.tag == tag)
        .expect("known check tag")
}

#[test]
fn criterion_3_partition_group_equivalence() {
    let report = run_suite(4, 3, 20260808, 0).unwrap();
    assert_eq!(report.spaces_checked, 355);
    let check = suite_check(&report, "partition-group-equivalence");
    assert_eq!(
        check.counterexamples.len(),
        0,
        "counterexamples: {:?}",
        check.counterexamples
    );
    assert_eq!(check.passes, 355);
    println!("criterion 3 (partition ⇔ inversion-closed ⇔ subgroup, 355 spaces): PASS");
}

#[test]
fn criterion_4_zero_sum_saturation() {
    for n in 1..=4 {
        let report = run_suite(n, 3, 11, 0).unwrap();
        let check = suite_check(&report, "zero-sum-saturation");
        assert_eq!(
            check.counterexamples.len(),
            0,
            "n = {n}: {:?}",
            check.counterexamples
        );
        assert_eq!(check.passes, report.spaces_checked);
    }
    println!("criterion 4 (zero-sum saturation ⇔ indiscrete, n ≤ 4): PASS");
}

#[test]
fn criterion_5_t0_separation() {
    for n in 1..=4 {
        let report = run_suite(n, 3, 4242, 0).unwrap();
        let check = suite_check(&report, "t0-separation");
        assert_eq!(
            check.counterexamples.len(),
            0,
            "n = {n}: {:?}",
            check.counterexamples
        );
        assert_eq!(check.passes, report.spaces_checked);
    }
    println!("criterion 5 (T0 ⇔ sampled separability ⇔ antisymmetry, n ≤ 4): PASS");
}

#[test]
fn criterion_6_trace_identity() {
    for n in 1..=4 {
        let report = run_suite(n, 3, 7, 0).unwrap();
        let check = suite_check(&report, "trace-identity");
        assert_eq!(
            check.counterexamples.len(),
            0,
            "n = {n}: {:?}",
            check.counterexamples
        );
        assert_eq!(check.passes, report.spaces_checked);
    }
    println!("criterion 6 (coset trace equals minimal neighborhood, n ≤ 4): PASS");
}

#[test]
fn criterion_7_separating_maps() {
    let mut maps_checked = 0usize;
    for n in 1..=4 {
        for space in enumerate_spaces(n).unwrap() {
            if !space.is_t0() {
                continue;
            }
            for mask in 1u32..(1 << space.len()) {
                let chosen: Vec<Point> = (0..space.len())
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| space.point(i).clone())
                    .collect();
                let map = space.separating_map(&chosen).unwrap();
                assert!(
                    map.is_continuous(),
                    "chosen {chosen:?} on {}",
                    space.to_json()
                );
                assert!(
                    map.is_injective_on(&chosen).unwrap(),
                    "chosen {chosen:?} on {}",
                    space.to_json()
                );
                assert_eq!(map.codomain().len(), chosen.len());
                maps_checked += 1;
            }
        }
    }
    println!("criterion 7 (separating maps continuous and injective, {maps_checked} maps): PASS");
}

#[test]
fn criterion_8_base_axiom_sampling() {
    for n in 1..=4 {
        for (index, space) in enumerate_spaces(n).unwrap().enumerate() {
            let report = check_base_axioms(&space, 200, 0xBA5E ^ index as u64);
            assert!(
                report.is_clean(),
                "n = {n}, space {index}: {:?}",
                report.violations
            );
        }
    }
    println!("criterion 8 (base-axiom sampling, 200 samples × 389 spaces): PASS");
}

#[test]
fn criterion_9_known_witness_regression() {
    // The commutator witness over the two-point indiscrete space, with
    // the canonical two-factor certificate.
    let i2 = indiscrete(&["x", "y"]);
    let w = FreeWord::parse("x^-1 y x y^-1").unwrap();
    match member_nf(&i2, &w, 3).unwrap() {
        MembershipVerdict::Member { certificate } => {
            assert!(certificate.reconstructs_word(&w));
            assert_eq!(
                certificate,
                Certificate::Factors(vec![
                    ConjugatedGenerator {
                        conjugator: FreeWord::identity(),
                        from: Point::new("x"),
                        to: Point::new("y"),
                    },
                    ConjugatedGenerator {
                        conjugator: FreeWord::parse("x").unwrap(),
                        from: Point::new("y"),
                        to: Point::new("x"),
                    },
                ])
            );
        }
        other => panic!("expected member with certificate, got {other:?}"),
    }
    // The same word on every T0 space is excluded by the kernel argument.
    let mut t0_checked = 0usize;
    for n in 2..=4 {
        for space in enumerate_spaces(n).unwrap() {
            if !space.is_t0() {
                continue;
            }
            for x in 0..space.len() {
                for y in 0..space.len() {
                    if x == y {
                        continue;
                    }
                    let w = FreeWord::parse(&format!(
                        "{x}^-1 {y} {x} {y}^-1",
                        x = space.point(x),
                        y = space.point(y)
                    ))
                    .unwrap();
                    assert!(w.abelianize().is_zero());
                    assert_eq!(
                        member_nf(&space, &w, 3).unwrap(),
                        MembershipVerdict::NonMember {
                            obstruction: Obstruction::KernelCorollary
                        },
                        "commutator of {}, {} on {}",
                        space.point(x),
                        space.point(y),
                        space.to_json()
                    );
                    t0_checked += 1;
                }
            }
        }
    }
    println!(
        "criterion 9 (commutator witness certificate + kernel rejections, {t0_checked} pairs): PASS"
    );
}

/// The trace identity is also exercised directly, independently of the
/// suite plumbing that criterion 6 routes through.
#[test]
fn trace_identity_direct() {
    for n in 1..=4 {
        for space in enumerate_spaces(n).unwrap() {
            for (i, x) in space.points().iter().enumerate() {
                let trace = min_nbhd_trace(&space, x).unwrap();
                let expected: BTreeSet<Point> = space
                    .min_nbhd_idx(i)
                    .iter()
                    .map(|k| space.point(k).clone())
                    .collect();
                assert_eq!(trace, expected);
            }
        }
    }
}
