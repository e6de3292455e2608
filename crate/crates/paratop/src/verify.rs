//! Exhaustive verification suites over all labeled topologies on small
//! carriers.
//!
//! Each suite sweeps every space produced by
//! [`enumerate_spaces`] and checks a
//! group-level characterization through its decidable surrogate,
//! collecting machine-readable counterexamples (expected: none). Reports
//! are deterministic for a fixed `(n, depth_bound, rng_seed)`; wall time
//! is the one nondeterministic field and is zeroed in
//! [`SuiteReport::canonical_json`].

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::parabase::{
    check_base_axioms, member_nf, min_nbhd_trace, na_covers_zero_sum, separate_ap, specializes_ap,
    GenSet, MembershipVerdict,
};
use crate::rng::SplitMix64;
use crate::space::{enumerate_spaces, FiniteSpace, Point, SpaceError};
use crate::words::{AbelianVector, FreeWord, Sign};

/// Word census above which the battery samples instead of exhausting.
pub const WORD_SAMPLE_CAP: usize = 10_000;

/// Word-length guard for [`word_battery`].
pub const MAX_WORD_LENGTH_BOUND: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("word length bound {bound} exceeds the guard {max}")]
    WordLengthTooLarge { bound: usize, max: usize },
}

/// A space that failed a check, with enough data to re-run the check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub space: Value,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub tag: String,
    pub passes: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub carrier_size: usize,
    pub spaces_checked: usize,
    pub checks: Vec<CheckSummary>,
    pub wall_time_secs: f64,
}

impl SuiteReport {
    pub fn is_clean(&self) -> bool {
        self.checks.iter().all(|c| c.counterexamples.is_empty())
    }

    pub fn counterexample_count(&self) -> usize {
        self.checks.iter().map(|c| c.counterexamples.len()).sum()
    }

    /// JSON with the wall time zeroed: byte-identical for identical
    /// `(n, depth_bound, rng_seed)`.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.wall_time_secs = 0.0;
        serde_json::to_string(&clone).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "carrier {} | {} spaces | {:.3}s\n",
            self.carrier_size, self.spaces_checked, self.wall_time_secs
        );
        for check in &self.checks {
            out.push_str(&format!(
                "  {}: {} passed, {} counterexamples\n",
                check.tag,
                check.passes,
                check.counterexamples.len()
            ));
        }
        out.push_str(if self.is_clean() {
            "result: CLEAN\n"
        } else {
            "result: COUNTEREXAMPLES FOUND\n"
        });
        out
    }
}

/// Thread count from `PARATOP_THREADS`, else the machine parallelism.
pub fn default_threads() -> usize {
    std::env::var("PARATOP_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        })
}

/// Applies `f` to every item, possibly in parallel; results come back in
/// item order regardless of scheduling.
fn parallel_map<I, T, F>(items: &[I], threads: usize, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(usize, &I) -> T + Sync,
{
    let threads = threads.max(1).min(items.len().max(1));
    if threads <= 1 {
        return items.iter().enumerate().map(|(i, x)| f(i, x)).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let mut slots: Vec<Option<T>> = std::iter::repeat_with(|| None).take(items.len()).collect();
    std::thread::scope(|scope| {
        let mut rest = slots.as_mut_slice();
        let mut offset = 0;
        while !rest.is_empty() {
            let take = chunk.min(rest.len());
            let (head, tail) = rest.split_at_mut(take);
            let base = offset;
            let f = &f;
            let items = &items;
            scope.spawn(move || {
                for (k, slot) in head.iter_mut().enumerate() {
                    *slot = Some(f(base + k, &items[base + k]));
                }
            });
            rest = tail;
            offset += take;
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("worker filled slot"))
        .collect()
}

/// A random vector with ℓ1-norm at most `units`.
fn random_vector(space: &FiniteSpace, units: u64, rng: &mut SplitMix64) -> AbelianVector {
    let mut v = AbelianVector::zero();
    for _ in 0..rng.below(units + 1) {
        let p = space.point(rng.below(space.len() as u64) as usize).clone();
        let unit = AbelianVector::unit(p);
        v = if rng.below(2) == 0 {
            v.add(&unit)
        } else {
            v.sub(&unit)
        };
    }
    v
}

/// Sampled element pairs: random distinct pairs of norm ≤ 4, plus, for
/// every ordered point pair `(x, y)`, a targeted pair differing by
/// `y − x` — the witness shape that detects inseparability whenever two
/// points share a minimal neighborhood.
fn sample_pairs(
    space: &FiniteSpace,
    count: usize,
    rng: &mut SplitMix64,
) -> Vec<(AbelianVector, AbelianVector)> {
    let mut pairs = Vec::with_capacity(count + space.len() * space.len());
    while pairs.len() < count {
        let g = random_vector(space, 4, rng);
        let mut h = random_vector(space, 4, rng);
        let mut retries = 0;
        while h == g && retries < 100 {
            h = random_vector(space, 4, rng);
            retries += 1;
        }
        if h == g {
            h = g.add(&AbelianVector::unit(space.point(0).clone()));
        }
        pairs.push((g, h));
    }
    for x in 0..space.len() {
        for y in 0..space.len() {
            if x != y {
                let g = random_vector(space, 2, rng);
                let h = g.add(&AbelianVector::difference(
                    space.point(y).clone(),
                    space.point(x).clone(),
                ));
                pairs.push((g, h));
            }
        }
    }
    pairs
}

const SUITE_TAGS: [&str; 5] = [
    "partition-group-equivalence",
    "zero-sum-saturation",
    "t0-separation",
    "trace-identity",
    "partition-symmetry",
];

fn check_space(space: &FiniteSpace, depth_bound: usize, mut rng: SplitMix64) -> [Option<Value>; 5] {
    let mut failures: [Option<Value>; 5] = Default::default();
    let gens = GenSet::new(space);

    // The group admits continuous inversion exactly on partition spaces:
    // the space predicate, closure of the generator arcs under reversal,
    // and membership of every inverted generator must agree.
    let is_partition = space.is_partition();
    let inversion_closed = gens.inversion_closed();
    let inverses_member = gens.point_pairs().all(|(x, y)| {
        let inverse_gen =
            FreeWord::letter(y.clone(), Sign::Neg).concat(&FreeWord::letter(x.clone(), Sign::Pos));
        member_nf(space, &inverse_gen, depth_bound)
            .expect("generator letters lie in the carrier")
            .is_member()
    });
    if is_partition != inversion_closed || is_partition != inverses_member {
        failures[0] = Some(json!({
            "is_partition": is_partition,
            "generator_inversion_closed": inversion_closed,
            "all_inverted_generators_member": inverses_member,
        }));
    }

    // The monoid saturates the zero-sum subgroup exactly on indiscrete
    // carriers.
    let covers = na_covers_zero_sum(space);
    let indiscrete = space.is_indiscrete();
    if covers != indiscrete {
        failures[1] = Some(json!({
            "na_covers_zero_sum": covers,
            "is_indiscrete": indiscrete,
        }));
    }

    // T0 is equivalent to separability of every sampled pair, to
    // antisymmetry of coset specialization on the samples, and to
    // antisymmetry of the point traces.
    let t0 = space.is_t0();
    let pairs = sample_pairs(space, 50, &mut rng);
    let mut all_separable = true;
    let mut antisymmetric = true;
    let mut first_bad_pair = None;
    for (g, h) in &pairs {
        let separated = separate_ap(space, g, h)
            .expect("sampled over carrier points")
            .is_separated();
        let forward = specializes_ap(space, g, h).expect("carrier points");
        let backward = specializes_ap(space, h, g).expect("carrier points");
        if !separated {
            all_separable = false;
        }
        if forward && backward {
            antisymmetric = false;
        }
        if (!separated || (forward && backward)) && first_bad_pair.is_none() {
            first_bad_pair = Some((g.clone(), h.clone()));
        }
    }
    let traces: Vec<BTreeSet<Point>> = space
        .points()
        .iter()
        .map(|x| min_nbhd_trace(space, x).expect("carrier point"))
        .collect();
    let trace_antisymmetric = (0..space.len()).all(|x| {
        (0..space.len()).all(|y| {
            x == y || !(traces[x].contains(space.point(y)) && traces[y].contains(space.point(x)))
        })
    });
    if t0 != all_separable || t0 != antisymmetric || t0 != trace_antisymmetric {
        failures[2] = Some(json!({
            "is_t0": t0,
            "all_sampled_pairs_separable": all_separable,
            "specialization_antisymmetric": antisymmetric,
            "trace_antisymmetric": trace_antisymmetric,
            "witness_pair": first_bad_pair.map(|(g, h)| json!({"g": g, "h": h})),
        }));
    }

    // The coset trace on the carrier must reproduce the minimal
    // neighborhoods exactly.
    for (x, trace) in traces.iter().enumerate() {
        let expected: BTreeSet<Point> = space
            .min_nbhd_idx(x)
            .iter()
            .map(|i| space.point(i).clone())
            .collect();
        if *trace != expected {
            failures[3] = Some(json!({
                "point": space.point(x),
                "trace": trace.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "min_nbhd": expected.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            }));
            break;
        }
    }

    // On partition spaces coset specialization is symmetric.
    if is_partition {
        for (g, h) in &pairs {
            let forward = specializes_ap(space, g, h).expect("carrier points");
            let backward = specializes_ap(space, h, g).expect("carrier points");
            if forward != backward {
                failures[4] = Some(json!({
                    "g": g,
                    "h": h,
                    "forward": forward,
                    "backward": backward,
                }));
                break;
            }
        }
    }

    failures
}

/// Runs the theorem checks over every labeled topology on `n` points.
pub fn run_suite(
    n: usize,
    depth_bound: usize,
    rng_seed: u64,
    threads: usize,
) -> Result<SuiteReport, VerifyError> {
    let started = Instant::now();
    let spaces: Vec<FiniteSpace> = enumerate_spaces(n)?.collect();
    let root = SplitMix64::new(rng_seed);
    let outcomes = parallel_map(&spaces, threads, |index, space| {
        check_space(space, depth_bound, root.fork(index as u64))
    });
    let mut checks: Vec<CheckSummary> = SUITE_TAGS
        .iter()
        .map(|tag| CheckSummary {
            tag: tag.to_string(),
            passes: 0,
            counterexamples: Vec::new(),
        })
        .collect();
    for (space, outcome) in spaces.iter().zip(&outcomes) {
        for (slot, failure) in outcome.iter().enumerate() {
            match failure {
                None => checks[slot].passes += 1,
                Some(witness) => checks[slot].counterexamples.push(Counterexample {
                    space: serde_json::to_value(space.to_doc()).expect("space doc"),
                    witness: witness.clone(),
                }),
            }
        }
    }
    Ok(SuiteReport {
        carrier_size: n,
        spaces_checked: spaces.len(),
        checks,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

/// All reduced words of length 1..=`max_len`, in breadth-lexicographic
/// order.
fn all_reduced_words(space: &FiniteSpace, max_len: usize) -> Vec<FreeWord> {
    let mut out = Vec::new();
    let mut frontier = vec![FreeWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for base in &frontier {
            for p in space.points() {
                for sign in [Sign::Pos, Sign::Neg] {
                    let extended = base.concat(&FreeWord::letter(p.clone(), sign));
                    if extended.len() == base.len() + 1 {
                        next.push(extended);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn reduced_word_census(alphabet: usize, max_len: usize) -> usize {
    let letters = 2 * alphabet;
    let mut total = 0usize;
    let mut at_len = 1usize;
    for l in 1..=max_len {
        at_len = if l == 1 {
            letters
        } else {
            at_len.saturating_mul(letters - 1)
        };
        total = total.saturating_add(at_len);
    }
    total
}

fn random_reduced_word(space: &FiniteSpace, max_len: usize, rng: &mut SplitMix64) -> FreeWord {
    let len = 1 + rng.below(max_len as u64) as usize;
    let mut letters: Vec<(Point, Sign)> = Vec::with_capacity(len);
    while letters.len() < len {
        let p = space.point(rng.below(space.len() as u64) as usize).clone();
        let sign = if rng.below(2) == 0 {
            Sign::Pos
        } else {
            Sign::Neg
        };
        if let Some((q, t)) = letters.last() {
            if *q == p && *t == sign.flip() {
                continue;
            }
        }
        letters.push((p, sign));
    }
    FreeWord::from_letters(letters)
}

/// Separates `w ≠ e` from the identity through the chain-space route:
/// collapse the letters through a separating map, check the image stays
/// nontrivial, then separate abelianly or through the kernel argument.
/// Returns a witness JSON on failure.
fn separate_from_identity(space: &FiniteSpace, w: &FreeWord, depth_bound: usize) -> Option<Value> {
    let chosen = w.distinct_points();
    let map = match space.separating_map(&chosen) {
        Ok(map) => map,
        Err(err) => {
            return Some(json!({
                "word": w.to_string(),
                "error": err.to_string(),
            }))
        }
    };
    if !map.is_continuous() || !map.is_injective_on(&chosen).unwrap_or(false) {
        return Some(json!({
            "word": w.to_string(),
            "error": "separating map not continuous or not injective on letters",
        }));
    }
    let image = FreeWord::from_letters(
        w.letters()
            .iter()
            .map(|(p, s)| (map.apply(p).expect("letter in domain").clone(), *s)),
    );
    if image.is_identity() {
        return Some(json!({
            "word": w.to_string(),
            "error": "image under the letter collapse reduced to the identity",
        }));
    }
    let chain = map.codomain();
    let abelian = image.abelianize();
    if !abelian.is_zero() {
        match separate_ap(chain, &AbelianVector::zero(), &abelian) {
            Ok(sep) if sep.is_separated() => None,
            _ => Some(json!({
                "word": w.to_string(),
                "image": image.to_string(),
                "error": "abelian image inseparable from zero in the chain group",
            })),
        }
    } else {
        match member_nf(chain, &image, depth_bound) {
            Ok(verdict) if verdict.is_non_member() => None,
            Ok(verdict) => Some(json!({
                "word": w.to_string(),
                "image": image.to_string(),
                "verdict": verdict,
                "error": "zero-abelianization image not excluded from the monoid",
            })),
            Err(err) => Some(json!({
                "word": w.to_string(),
                "error": err.to_string(),
            })),
        }
    }
}

/// Per-space outcome of the word battery.
fn battery_check_space(
    space: &FiniteSpace,
    word_length_bound: usize,
    depth_bound: usize,
    mut rng: SplitMix64,
) -> [Option<Value>; 2] {
    let mut failures: [Option<Value>; 2] = Default::default();
    if space.is_t0() {
        let census = reduced_word_census(space.len(), word_length_bound);
        let words = if census <= WORD_SAMPLE_CAP {
            all_reduced_words(space, word_length_bound)
        } else {
            (0..WORD_SAMPLE_CAP)
                .map(|_| random_reduced_word(space, word_length_bound, &mut rng))
                .collect()
        };
        for w in &words {
            if let Some(witness) = separate_from_identity(space, w, depth_bound) {
                failures[0] = Some(witness);
                break;
            }
        }
    } else {
        // Two points sharing a minimal neighborhood yield a commutator
        // lying in the monoid together with its inverse: the inseparable
        // witness pair at the identity.
        let (x, y) = (0..space.len())
            .flat_map(|x| (0..space.len()).map(move |y| (x, y)))
            .find(|&(x, y)| x != y && space.min_nbhd_idx(x) == space.min_nbhd_idx(y))
            .expect("a non-T0 space has two points with equal neighborhoods");
        let w = FreeWord::from_letters([
            (space.point(x).clone(), Sign::Neg),
            (space.point(y).clone(), Sign::Pos),
            (space.point(x).clone(), Sign::Pos),
            (space.point(y).clone(), Sign::Neg),
        ]);
        let forward = member_nf(space, &w, depth_bound.max(2)).expect("carrier letters");
        let backward = member_nf(space, &w.invert(), depth_bound.max(2)).expect("carrier letters");
        let ok = match (&forward, &backward) {
            (
                MembershipVerdict::Member { certificate: cf },
                MembershipVerdict::Member { certificate: cb },
            ) => cf.reconstructs_word(&w) && cb.reconstructs_word(&w.invert()),
            _ => false,
        };
        if !ok {
            failures[1] = Some(json!({
                "word": w.to_string(),
                "forward": forward,
                "backward": backward,
            }));
        }
    }
    failures
}

/// Word-level T0 battery: on T0 spaces every short word (sampled past
/// [`WORD_SAMPLE_CAP`]) separates from the identity by the chain-space
/// route; on non-T0 spaces the canonical commutator witness and its
/// inverse are both members.
pub fn word_battery(
    n: usize,
    word_length_bound: usize,
    depth_bound: usize,
    rng_seed: u64,
    threads: usize,
) -> Result<SuiteReport, VerifyError> {
    if word_length_bound > MAX_WORD_LENGTH_BOUND {
        return Err(VerifyError::WordLengthTooLarge {
            bound: word_length_bound,
            max: MAX_WORD_LENGTH_BOUND,
        });
    }
    let started = Instant::now();
    let spaces: Vec<FiniteSpace> = enumerate_spaces(n)?.collect();
    let root = SplitMix64::new(rng_seed);
    let outcomes = parallel_map(&spaces, threads, |index, space| {
        battery_check_space(
            space,
            word_length_bound,
            depth_bound,
            root.fork(index as u64),
        )
    });
    let tags = ["t0-word-separation", "non-t0-witness"];
    let mut checks: Vec<CheckSummary> = tags
        .iter()
        .map(|tag| CheckSummary {
            tag: tag.to_string(),
            passes: 0,
            counterexamples: Vec::new(),
        })
        .collect();
    for (space, outcome) in spaces.iter().zip(&outcomes) {
        let relevant = if space.is_t0() { 0 } else { 1 };
        for (slot, check) in checks.iter_mut().enumerate() {
            match &outcome[slot] {
                None => {
                    if slot == relevant {
                        check.passes += 1;
                    }
                }
                Some(witness) => check.counterexamples.push(Counterexample {
                    space: serde_json::to_value(space.to_doc()).expect("space doc"),
                    witness: witness.clone(),
                }),
            }
        }
    }
    Ok(SuiteReport {
        carrier_size: n,
        spaces_checked: spaces.len(),
        checks,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

/// Runs [`check_base_axioms`] over every labeled topology on `n` points.
pub fn base_axiom_sweep(
    n: usize,
    sample_count: usize,
    rng_seed: u64,
    threads: usize,
) -> Result<SuiteReport, VerifyError> {
    let started = Instant::now();
    let spaces: Vec<FiniteSpace> = enumerate_spaces(n)?.collect();
    let root = SplitMix64::new(rng_seed);
    let outcomes = parallel_map(&spaces, threads, |index, space| {
        check_base_axioms(space, sample_count, root.fork(index as u64).next_u64())
    });
    let mut summary = CheckSummary {
        tag: "base-axioms".to_string(),
        passes: 0,
        counterexamples: Vec::new(),
    };
    for (space, report) in spaces.iter().zip(&outcomes) {
        if report.is_clean() {
            summary.passes += 1;
        } else {
            summary.counterexamples.push(Counterexample {
                space: serde_json::to_value(space.to_doc()).expect("space doc"),
                witness: json!({ "violations": report.violations }),
            });
        }
    }
    Ok(SuiteReport {
        carrier_size: n,
        spaces_checked: spaces.len(),
        checks: vec![summary],
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}
