//! Cross-checks for the canonical-sequence engine: an independent graded
//! oracle for the multiplicative-group actions on the line, stage replays,
//! and stability of stage counts under change of prime field.

use gcx_core::canseq::{
    canonical_sequence, is_effective_epi, verify_chain, verify_stage_condition_ii, Effectivity,
    SeqLength, SequenceConfig,
};
use gcx_core::field::Field;
use gcx_core::groebner::Budget;
use gcx_core::poly::Polynomial;
use gcx_core::rings::{subalgebra_presentation, GraphRing, PresentedRing, RingMap};

fn budget() -> Budget {
    Budget::default()
}

/// The comparison map for the scaling action of the n-th roots of unity on
/// the line: D = k[x, x']/(x^n - x'^n) → C = k[x, z]/(z^n - 1), x ↦ x,
/// x' ↦ x z.
fn mu_comparison(field: Field, n: u32) -> RingMap {
    let b = PresentedRing::free(field, vec!["x".into()]);
    let (_a, a_to_b) = subalgebra_presentation(
        &b,
        &[b.parse(&format!("x^{n}")).unwrap()],
        &["y".to_string()],
        &budget(),
    )
    .unwrap();
    let tensor = gcx_core::rings::tensor_over_base(&a_to_b, &a_to_b, &budget()).unwrap();
    let c_names: Vec<String> = vec!["x".into(), "z".into()];
    let zn = gcx_core::parse::parse_polynomial(&format!("z^{n} - 1"), field, &c_names).unwrap();
    let c = PresentedRing::new(field, c_names, &[zn], &budget()).unwrap();
    RingMap::new(
        tensor.ring.clone(),
        c.clone(),
        vec![c.parse("x").unwrap(), c.parse("x * z").unwrap()],
        &budget(),
    )
    .unwrap()
}

/// Independent model of C = k[x, z]/(z^n - 1): coefficients on the monomial
/// grid x^a z^b with 0 ≤ b < n, plus hand-derived images in the tensor
/// square, whose basis splits as {z1^b z2^c} in x-degree zero and
/// {x^a z2^c} for a ≥ 1 (the relation x(z1 - z2) merges the factors).
struct GradedOracle {
    n: usize,
}

impl GradedOracle {
    /// α - β vanishes on x^a z^b exactly when a ≥ 1 or b = 0.
    fn equalizes(&self, a: u32, b: usize) -> bool {
        a >= 1 || b == 0
    }

    /// x^a z^b lies in the subalgebra generated by x and x z exactly when
    /// the z-exponent can be absorbed: b ≤ a after reduction mod n.
    fn in_image(&self, a: u32, b: usize) -> bool {
        (b % self.n) as u32 <= a
    }

    /// The whole equalizer lies in the image exactly for n ≤ 2.
    fn effective(&self) -> bool {
        (1..self.n).all(|b| self.in_image(1, b) || !self.equalizes(1, b))
    }
}

/// Expand an element of C = k[x, z]/(z^n - 1) on the monomial grid.
fn grid(p: &Polynomial, n: usize) -> Vec<(u32, usize)> {
    p.terms()
        .iter()
        .map(|t| (t.mono.0[0], (t.mono.0[1] as usize) % n))
        .collect()
}

#[test]
fn graded_oracle_agrees_with_engine() {
    for n in [2u32, 3, 4] {
        let oracle = GradedOracle { n: n as usize };
        let f = mu_comparison(Field::Rationals, n);
        let config = SequenceConfig::default();
        let result = canonical_sequence(&f, &config).unwrap();
        let SeqLength::Resolved(len) = result.length else {
            panic!("sequence for n = {n} did not resolve");
        };
        assert!(result.dominant);

        // stage-1 generators all equalize according to the oracle
        let stage1 = &result.stages[1.min(result.stages.len() - 1)];
        for g in &stage1.module_generators {
            for (a, b) in grid(g, n as usize) {
                assert!(
                    oracle.equalizes(a, b),
                    "engine stage-1 generator {g:?} escapes the oracle equalizer (n = {n})"
                );
            }
        }

        // every oracle equalizer basis monomial of small degree lies in the
        // engine's stage-1 span
        let graph = GraphRing::new(&f, &budget()).unwrap();
        let engine = graph
            .span_engine(&stage1.module_generators, &budget())
            .unwrap();
        let c = f.target();
        for a in 0..=3u32 {
            for b in 0..n as usize {
                if !oracle.equalizes(a, b) {
                    continue;
                }
                let mono = c
                    .parse(&format!("x^{a} * z^{b}"))
                    .unwrap();
                assert!(
                    graph.member_of_span(&engine, &mono).unwrap().is_some(),
                    "oracle equalizer element x^{a} z^{b} missing from engine span (n = {n})"
                );
            }
        }

        // termination verdict: effective at stage one iff the oracle says so
        let engine_effective = matches!(
            is_effective_epi(&f, &config).unwrap(),
            Effectivity::Effective
        );
        assert_eq!(engine_effective, oracle.effective(), "n = {n}");
        assert_eq!(len <= 1, oracle.effective(), "length verdict for n = {n}");

        // replays on the resolved sequence
        assert!(verify_chain(&f, &result, &budget()).unwrap());
        let flags = verify_stage_condition_ii(&result, &budget()).unwrap();
        assert!(flags.iter().all(|&ok| ok), "stage condition fails for n = {n}");
    }
}

fn cusp_map(field: Field) -> RingMap {
    let b = PresentedRing::free(field, vec!["t".into()]);
    let (_a, a_to_b) = subalgebra_presentation(
        &b,
        &[b.parse("t^3").unwrap(), b.parse("t^4").unwrap()],
        &["x".to_string(), "y".to_string()],
        &budget(),
    )
    .unwrap();
    a_to_b
}

/// The cusp normalization has the same stage count over the rationals and
/// over prime fields where the data stay defined.
#[test]
fn stage_count_stable_under_prime_reduction() {
    let reference = canonical_sequence(&cusp_map(Field::Rationals), &SequenceConfig::default())
        .unwrap();
    assert_eq!(reference.length, SeqLength::Resolved(2));
    for p in [5u64, 7] {
        let field = Field::prime(p).unwrap();
        let result =
            canonical_sequence(&cusp_map(field), &SequenceConfig::default()).unwrap();
        assert_eq!(result.length, SeqLength::Resolved(2), "p = {p}");
        assert!(result.separated);
        assert!(result.dominant);
        assert_eq!(result.stages.len(), reference.stages.len());
    }
}

/// Replays hold on every resolved fixture sequence.
#[test]
fn replays_on_resolved_sequences() {
    let fixtures: Vec<RingMap> = vec![
        cusp_map(Field::Rationals),
        mu_comparison(Field::Rationals, 2),
        mu_comparison(Field::Rationals, 3),
        mu_comparison(Field::prime(5).unwrap(), 3),
    ];
    for f in &fixtures {
        let result = canonical_sequence(f, &SequenceConfig::default()).unwrap();
        assert!(matches!(result.length, SeqLength::Resolved(_)));
        assert!(verify_chain(f, &result, &budget()).unwrap());
        let flags = verify_stage_condition_ii(&result, &budget()).unwrap();
        assert!(flags.iter().all(|&ok| ok));
        // stage generator lists start with 1 and carry every base image
        let c = f.target();
        let distinct_images: Vec<Polynomial> = {
            let mut v: Vec<Polynomial> = Vec::new();
            for im in f.images() {
                let nf = c.normal_form(im);
                if !v.contains(&nf) && !nf.is_one() {
                    v.push(nf);
                }
            }
            v
        };
        for stage in &result.stages {
            assert!(stage.module_generators[0].is_one());
            let prefix = &stage.module_generators[..=distinct_images.len()];
            for im in &distinct_images {
                assert!(
                    prefix.contains(im),
                    "base image missing from the stage generator prefix"
                );
            }
        }
    }
}
