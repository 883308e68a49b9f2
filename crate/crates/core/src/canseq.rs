//! Canonical sequences of finite ring maps, equalizer subalgebras, and
//! effectivity verdicts.
//!
//! For a finite map `f: D → C` the sequence of subalgebras `A_0 = C ⊇ A_1 ⊇ …`
//! is defined by taking kernels of the two insertions `A_i ⇉ A_i ⊗_D A_i`.
//! Each stage is carried as a list of module generators over `D` inside `C`
//! together with an abstract presentation; the iteration stops when two
//! consecutive stages span the same `D`-module.

use crate::error::{Error, Result};
use crate::groebner::Budget;
use crate::modules::ModuleVector;
use crate::poly::Polynomial;
use crate::rings::{
    dominance, subalgebra_presentation, tensor_over_base, FinitenessCertificate, GraphRing,
    PresentedRing, RingMap, SaturationLimits,
};
use crate::span::SpanEngine;

/// One stage `A_i` of a canonical sequence.
#[derive(Debug, Clone)]
pub struct SubalgebraStage {
    pub index: usize,
    /// Elements of the ambient `C`, canonical forms; the list begins with 1
    /// followed by the images of the base generators.
    pub module_generators: Vec<Polynomial>,
    /// A minimal spanning sublist used for the computations.
    pub spanning_core: Vec<Polynomial>,
    /// Abstract presentation of the stage: one variable per distinct
    /// nonconstant module generator.
    pub presentation: PresentedRing,
    /// Elements of `C` realizing each presentation variable, aligned with
    /// `presentation.var_names()`.
    pub presentation_gens: Vec<Polynomial>,
    /// The evaluation map presentation → C.
    pub presentation_map: RingMap,
    /// The base D mapped into the stage presentation.
    pub base_to_stage: RingMap,
    /// Stage 0 uses the ambient ring as its own presentation.
    pub ambient_is_presentation: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqLength {
    Resolved(usize),
    /// The stage budget ran out after computing this many strict descents.
    Unresolved { stages_computed: usize },
}

#[derive(Debug, Clone)]
pub struct CanonicalSequenceResult {
    pub stages: Vec<SubalgebraStage>,
    pub length: SeqLength,
    pub separated: bool,
    pub dominant: bool,
    pub dominance_witness: Option<Polynomial>,
}

#[derive(Debug, Clone)]
pub enum Effectivity {
    Effective,
    /// A stage-1 element outside the image of the base.
    NotEffective { witness: Polynomial },
    NotDominant { witness: Polynomial },
}

#[derive(Debug, Clone, Copy)]
pub struct SequenceConfig {
    pub max_stages: usize,
    pub budget: Budget,
    pub saturation: SaturationLimits,
}

impl Default for SequenceConfig {
    fn default() -> Self {
        SequenceConfig {
            max_stages: 8,
            budget: Budget::default(),
            saturation: SaturationLimits::default(),
        }
    }
}

/// Span bookkeeping for a stage: the graph of `f` plus an engine over the
/// current generator list.
struct StageSpan<'a> {
    graph: &'a GraphRing,
    engine: SpanEngine,
}

impl<'a> StageSpan<'a> {
    fn new(graph: &'a GraphRing, gens: &[Polynomial], budget: &Budget) -> Result<Self> {
        Ok(StageSpan {
            graph,
            engine: graph.span_engine(gens, budget)?,
        })
    }

    fn contains(&self, candidate: &Polynomial) -> Result<bool> {
        Ok(self.graph.member_of_span(&self.engine, candidate)?.is_some())
    }
}

/// Module generators over the base `D` of the equalizer of two maps
/// `alpha, beta: C → E` that agree on the image of `D`.
///
/// The kernel is cut out by the coefficient-restricted syzygies of the
/// differences `alpha(g_i) - beta(g_i)` in the graph ring of `E` over `D`:
/// a tuple of base coefficients kills the differences exactly when the
/// corresponding combination of the `g_i` equalizes. The output always
/// contains 1 and the images of the base generators, and drops rows whose
/// span is already covered.
pub fn equalizer(
    alpha: &RingMap,
    beta: &RingMap,
    base_to_c: &RingMap,
    base_to_e: &RingMap,
    cert_c: &FinitenessCertificate,
    cert_e: &FinitenessCertificate,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    let c = alpha.source();
    let e = alpha.target();
    if beta.source() != c || beta.target() != e {
        return Err(Error::AmbientMismatch(
            "equalizer maps must share source and target".into(),
        ));
    }
    if base_to_c.target() != c || base_to_e.target() != e {
        return Err(Error::AmbientMismatch(
            "base maps must land in the equalizer's source and target".into(),
        ));
    }
    // alpha and beta must restrict to the same base map
    let via_alpha = base_to_c.compose(alpha)?;
    let via_beta = base_to_c.compose(beta)?;
    if !via_alpha.maps_equal(base_to_e) || !via_beta.maps_equal(base_to_e) {
        return Err(Error::CertificateInvalid(
            "maps do not agree on the base".into(),
        ));
    }
    if cert_c.generators.first().map(|g| !g.is_one()).unwrap_or(true)
        || cert_e.generators.first().map(|g| !g.is_one()).unwrap_or(true)
    {
        return Err(Error::CertificateInvalid(
            "certificates must list 1 first".into(),
        ));
    }

    let graph_e = GraphRing::new(base_to_e, budget)?;
    let deltas: Vec<Polynomial> = cert_c
        .generators
        .iter()
        .map(|g| e.normal_form(&alpha.apply(g).sub(&beta.apply(g))))
        .collect();
    let targets: Vec<ModuleVector> = deltas
        .iter()
        .map(|d| ModuleVector::new(vec![graph_e.embed_target(d)]))
        .collect();
    let engine = SpanEngine::new(&graph_e.gb, graph_e.x_vars, &targets, budget)?;
    let rows = engine.relation_rows();

    // realize rows as elements of C, normalized monic for determinism
    let ambient_order = crate::monomial::MonomialOrder::degrevlex(c.vars());
    let mut candidates: Vec<Polynomial> = Vec::new();
    for row in &rows {
        let mut acc = c.zero();
        for (h, g) in row.iter().zip(&cert_c.generators) {
            let h_in_c = base_to_c.apply(h);
            acc = acc.add(&h_in_c.mul(g));
        }
        let nf = c.normal_form(&acc).monic(&ambient_order);
        if !nf.is_zero() && !candidates.contains(&nf) {
            candidates.push(nf);
        }
    }
    candidates.sort();

    // assemble: 1, base images, then new spans only
    let graph_c = GraphRing::new(base_to_c, budget)?;
    let mut gens: Vec<Polynomial> = vec![c.one()];
    for im in base_to_c.images() {
        let nf = c.normal_form(im);
        if !gens.contains(&nf) {
            gens.push(nf);
        }
    }
    let mut span = StageSpan::new(&graph_c, &gens, budget)?;
    for cand in candidates {
        if !span.contains(&cand)? {
            gens.push(cand);
            span = StageSpan::new(&graph_c, &gens, budget)?;
        }
    }

    // exactness replay: every generator must equalize
    for g in &gens {
        let diff = alpha.apply(g).sub(&beta.apply(g));
        if !e.contains(&diff) {
            return Err(Error::Internal(
                "equalizer output fails to equalize".into(),
            ));
        }
    }
    Ok(gens)
}

/// Assemble the stage data for a generator list: presentation on the
/// distinct nonconstant generators, evaluation map, and the base map into
/// the presentation.
fn build_stage(
    index: usize,
    f: &RingMap,
    gens: Vec<Polynomial>,
    core: Vec<Polynomial>,
    budget: &Budget,
) -> Result<SubalgebraStage> {
    let c = f.target();
    let d = f.source();
    let mut pres_gens: Vec<Polynomial> = Vec::new();
    for g in &gens {
        if g.is_constant() {
            continue;
        }
        if !pres_gens.contains(g) {
            pres_gens.push(g.clone());
        }
    }
    let (presentation, presentation_map, base_to_stage);
    if pres_gens.is_empty() {
        // the stage is the base field inside C
        presentation = PresentedRing::ground(c.field());
        presentation_map = RingMap::new(presentation.clone(), c.clone(), Vec::new(), budget)?;
        base_to_stage = RingMap::new(d.clone(), presentation.clone(), Vec::new(), budget)?;
    } else {
        let names: Vec<String> = (1..=pres_gens.len()).map(|i| format!("g{i}")).collect();
        let (pres, onto) = subalgebra_presentation(c, &pres_gens, &names, budget)?;
        // base generators map to their representing presentation variables
        let mut base_images = Vec::with_capacity(d.vars());
        for im in f.images() {
            let nf = c.normal_form(im);
            let expr = if nf.is_constant() {
                let coeff = nf
                    .terms()
                    .first()
                    .map(|t| t.coeff.clone())
                    .unwrap_or_else(|| c.field().zero());
                Polynomial::constant(c.field(), pres.vars(), coeff)
            } else {
                let idx = pres_gens
                    .iter()
                    .position(|g| *g == nf)
                    .ok_or_else(|| Error::Internal("base image missing from stage".into()))?;
                pres.variable(idx)
            };
            base_images.push(expr);
        }
        base_to_stage = RingMap::new(d.clone(), pres.clone(), base_images, budget)?;
        presentation_map = onto;
        presentation = pres;
    }
    Ok(SubalgebraStage {
        index,
        module_generators: gens,
        spanning_core: core,
        presentation,
        presentation_gens: pres_gens,
        presentation_map,
        base_to_stage,
        ambient_is_presentation: false,
    })
}

/// Minimal spanning sublist of `gens`: keeps 1 and every generator not in the
/// span of those kept before it.
fn spanning_core(
    graph: &GraphRing,
    gens: &[Polynomial],
    one: Polynomial,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    let mut core = vec![one];
    let mut span = StageSpan::new(graph, &core, budget)?;
    for g in gens {
        if g.is_one() {
            continue;
        }
        if !span.contains(g)? {
            core.push(g.clone());
            span = StageSpan::new(graph, &core, budget)?;
        }
    }
    Ok(core)
}

/// The canonical sequence of `f: D → C`. Requires a finiteness certificate to
/// exist; dominance is reported alongside (it is not needed for the stages).
pub fn canonical_sequence(f: &RingMap, config: &SequenceConfig) -> Result<CanonicalSequenceResult> {
    let budget = &config.budget;
    let c = f.target();
    let (dominant, dominance_witness) = dominance(f, budget)?;
    let cert0 = finiteness_like(f, config)?;
    let graph_c = GraphRing::new(f, budget)?;

    // stage 0 generators: 1, base images, then the certified module span
    let mut gens0: Vec<Polynomial> = vec![c.one()];
    for im in f.images() {
        let nf = c.normal_form(im);
        if !gens0.contains(&nf) {
            gens0.push(nf);
        }
    }
    {
        let mut span = StageSpan::new(&graph_c, &gens0, budget)?;
        for g in &cert0.generators {
            if !span.contains(g)? {
                gens0.push(g.clone());
                span = StageSpan::new(&graph_c, &gens0, budget)?;
            }
        }
    }
    let core0 = spanning_core(&graph_c, &gens0, c.one(), budget)?;
    let stage0 = SubalgebraStage {
        index: 0,
        module_generators: gens0,
        spanning_core: core0,
        presentation: c.clone(),
        presentation_gens: (0..c.vars()).map(|i| c.variable(i)).collect(),
        presentation_map: RingMap::identity(c),
        base_to_stage: f.clone(),
        ambient_is_presentation: true,
    };

    let mut stages = vec![stage0];
    let mut length = None;
    let mut separated = false;

    for i in 0..config.max_stages {
        let stage = &stages[i];
        let next_gens = next_stage_generators(f, stage, budget)?;

        // equality with the current stage: mutual span containment (the new
        // stage is contained in the old by construction)
        let span_next = StageSpan::new(&graph_c, &next_gens, budget)?;
        let mut equal = true;
        for g in &stage.module_generators {
            if !span_next.contains(g)? {
                equal = false;
                break;
            }
        }
        if equal {
            length = Some(i);
            separated = stage_is_separated(&graph_c, &stages[i], budget)?;
            break;
        }

        let core = spanning_core(&graph_c, &next_gens, c.one(), budget)?;
        let next_stage = build_stage(i + 1, f, next_gens, core, budget)?;

        // once a stage equals the image of the base it is stable
        let image_only = next_stage
            .module_generators
            .iter()
            .all(|g| g.is_constant() || f.images().iter().any(|im| c.normal_form(im) == *g));
        stages.push(next_stage);
        if image_only {
            length = Some(i + 1);
            separated = true;
            break;
        }
    }

    let length = match length {
        Some(n) => SeqLength::Resolved(n),
        None => SeqLength::Unresolved {
            stages_computed: config.max_stages,
        },
    };
    Ok(CanonicalSequenceResult {
        stages,
        length,
        separated,
        dominant,
        dominance_witness,
    })
}

fn finiteness_like(f: &RingMap, config: &SequenceConfig) -> Result<FinitenessCertificate> {
    crate::rings::finiteness_certificate(f, &config.saturation, &config.budget)
}

/// Is the span of the stage exactly the image of the base?
fn stage_is_separated(
    graph_c: &GraphRing,
    stage: &SubalgebraStage,
    budget: &Budget,
) -> Result<bool> {
    let one = stage
        .module_generators
        .first()
        .cloned()
        .ok_or_else(|| Error::Internal("empty stage".into()))?;
    let image_span = StageSpan::new(graph_c, &[one], budget)?;
    for g in &stage.module_generators {
        if !image_span.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compute the generators of `A_{i+1}` from stage `i` by tensoring the stage
/// presentation with itself over the base and taking the equalizer of the
/// two insertions.
fn next_stage_generators(
    f: &RingMap,
    stage: &SubalgebraStage,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    let c = f.target();
    // spanning core in presentation coordinates
    let core_in_pres: Vec<Polynomial> = stage
        .spanning_core
        .iter()
        .map(|g| represent_in_presentation(stage, g))
        .collect::<Result<Vec<_>>>()?;

    let tensor = tensor_over_base(&stage.base_to_stage, &stage.base_to_stage, budget)?;
    let base_to_e = stage.base_to_stage.compose(&tensor.left)?;
    let cert_p = FinitenessCertificate {
        generators: core_in_pres,
        witnesses: Vec::new(),
    };
    let cert_e = FinitenessCertificate {
        generators: vec![tensor.ring.one()],
        witnesses: Vec::new(),
    };
    let eq = equalizer(
        &tensor.left,
        &tensor.right,
        &stage.base_to_stage,
        &base_to_e,
        &cert_p,
        &cert_e,
        budget,
    )?;
    // push the equalizer elements down into C
    let mut gens: Vec<Polynomial> = vec![c.one()];
    for im in f.images() {
        let nf = c.normal_form(im);
        if !gens.contains(&nf) {
            gens.push(nf);
        }
    }
    let graph_c = GraphRing::new(f, budget)?;
    let mut span = StageSpan::new(&graph_c, &gens, budget)?;
    let ambient_order = crate::monomial::MonomialOrder::degrevlex(c.vars());
    let mut extras: Vec<Polynomial> = Vec::new();
    for g in &eq {
        let down = c.normal_form(&stage.presentation_map.apply(g)).monic(&ambient_order);
        if !down.is_zero() && !extras.contains(&down) {
            extras.push(down);
        }
    }
    extras.sort();
    for cand in extras {
        if !span.contains(&cand)? {
            gens.push(cand);
            span = StageSpan::new(&graph_c, &gens, budget)?;
        }
    }
    Ok(gens)
}

/// Express an element of `C` lying in the stage's span in the presentation
/// variables.
fn represent_in_presentation(stage: &SubalgebraStage, g: &Polynomial) -> Result<Polynomial> {
    if stage.ambient_is_presentation {
        return Ok(g.clone());
    }
    let c_field = stage.presentation.field();
    if g.is_constant() {
        let coeff = g
            .terms()
            .first()
            .map(|t| t.coeff.clone())
            .unwrap_or_else(|| c_field.zero());
        return Ok(Polynomial::constant(
            c_field,
            stage.presentation.vars(),
            coeff,
        ));
    }
    let idx = stage
        .presentation_gens
        .iter()
        .position(|p| p == g)
        .ok_or_else(|| Error::Internal("stage generator missing from presentation".into()))?;
    Ok(stage.presentation.variable(idx))
}

/// Effectivity of a finite dominant map: the map is an effective epimorphism
/// exactly when the first equalizer stage already equals the image of the
/// base. A failure is witnessed by a stage-1 element outside the image.
pub fn is_effective_epi(f: &RingMap, config: &SequenceConfig) -> Result<Effectivity> {
    let budget = &config.budget;
    let (dominant, witness) = dominance(f, budget)?;
    if !dominant {
        return Ok(Effectivity::NotDominant {
            witness: witness.unwrap_or_else(|| f.source().one()),
        });
    }
    let cert0 = finiteness_like(f, config)?;
    let c = f.target();
    let graph_c = GraphRing::new(f, budget)?;
    let mut gens0: Vec<Polynomial> = vec![c.one()];
    for im in f.images() {
        let nf = c.normal_form(im);
        if !gens0.contains(&nf) {
            gens0.push(nf);
        }
    }
    {
        let mut span = StageSpan::new(&graph_c, &gens0, budget)?;
        for g in &cert0.generators {
            if !span.contains(g)? {
                gens0.push(g.clone());
                span = StageSpan::new(&graph_c, &gens0, budget)?;
            }
        }
    }
    let core0 = spanning_core(&graph_c, &gens0, c.one(), budget)?;
    let stage0 = SubalgebraStage {
        index: 0,
        module_generators: gens0,
        spanning_core: core0,
        presentation: c.clone(),
        presentation_gens: (0..c.vars()).map(|i| c.variable(i)).collect(),
        presentation_map: RingMap::identity(c),
        base_to_stage: f.clone(),
        ambient_is_presentation: true,
    };
    let stage1_gens = next_stage_generators(f, &stage0, budget)?;
    let image_span = StageSpan::new(&graph_c, &[c.one()], budget)?;
    for g in &stage1_gens {
        if !image_span.contains(g)? {
            return Ok(Effectivity::NotEffective { witness: g.clone() });
        }
    }
    Ok(Effectivity::Effective)
}

/// Replay, for every consecutive pair of stages, that each generator of the
/// later stage equalizes the two insertions into the tensor square of the
/// earlier stage. Returns one flag per transition.
pub fn verify_stage_condition_ii(
    result: &CanonicalSequenceResult,
    budget: &Budget,
) -> Result<Vec<bool>> {
    let mut flags = Vec::new();
    for window in result.stages.windows(2) {
        let (prev, next) = (&window[0], &window[1]);
        let tensor = tensor_over_base(&prev.base_to_stage, &prev.base_to_stage, budget)?;
        let graph_prev = GraphRing::new(&prev.base_to_stage.compose(&prev.presentation_map)?, budget)?;
        let span_prev = graph_prev.span_engine(&prev.spanning_core, budget)?;
        let mut ok = true;
        for g in &next.module_generators {
            // write g over the previous stage's span, lift to the
            // presentation, and compare the two insertions
            let Some(row) = graph_prev.member_of_span(&span_prev, g)? else {
                ok = false;
                break;
            };
            let mut lifted = prev.presentation.zero();
            for (h, core_gen) in row.iter().zip(&prev.spanning_core) {
                let h_in_pres = prev.base_to_stage.apply(h);
                let core_in_pres = represent_in_presentation(prev, core_gen)?;
                lifted = lifted.add(&h_in_pres.mul(&core_in_pres));
            }
            let diff = tensor.left.apply(&lifted).sub(&tensor.right.apply(&lifted));
            if !tensor.ring.contains(&diff) {
                ok = false;
                break;
            }
        }
        flags.push(ok);
    }
    Ok(flags)
}

/// Chain replay used by the test suites: every generator of stage i+1 lies in
/// the span of stage i.
pub fn verify_chain(f: &RingMap, result: &CanonicalSequenceResult, budget: &Budget) -> Result<bool> {
    let graph_c = GraphRing::new(f, budget)?;
    for window in result.stages.windows(2) {
        let span_prev = StageSpan::new(&graph_c, &window[0].module_generators, budget)?;
        for g in &window[1].module_generators {
            if !span_prev.contains(g)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
