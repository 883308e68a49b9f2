//! Job dispatch: run one command against a parsed document and produce a
//! report plus the process exit code.

use std::time::Instant;

use gcx_core::canseq::{
    canonical_sequence, is_effective_epi, Effectivity, SeqLength, SequenceConfig,
    SubalgebraStage,
};
use gcx_core::equivariant::{counit_check, module_invariants};
use gcx_core::error::Error;
use gcx_core::groupoids::{
    complexity, stabilizer, verify_invariants, ComplexityVerdict, GroupoidPresentation,
};
use gcx_core::poly::Polynomial;
use gcx_core::rings::{subalgebra_presentation, tensor_over_base, RingMap, SaturationLimits};

use crate::input::Document;
use crate::report::{
    CounitSection, InvariantCheck, Report, SequenceSection, StabilizerSection, StageSection,
    ValidationSection,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NOT_DOMINANT: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } | Error::NotFinite { .. } => EXIT_RESOURCE,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Canseq,
    Effepi,
    Stabilizer,
    Complexity,
    Invariants,
    Equivariant,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Canseq => "canseq",
            Command::Effepi => "effepi",
            Command::Stabilizer => "stabilizer",
            Command::Complexity => "complexity",
            Command::Invariants => "invariants",
            Command::Equivariant => "equivariant",
        }
    }

    pub fn parse(name: &str) -> Option<Command> {
        Some(match name {
            "validate" => Command::Validate,
            "canseq" => Command::Canseq,
            "effepi" => Command::Effepi,
            "stabilizer" => Command::Stabilizer,
            "complexity" => Command::Complexity,
            "invariants" => Command::Invariants,
            "equivariant" => Command::Equivariant,
            _ => return None,
        })
    }
}

pub struct RunOverrides {
    pub max_stages: Option<usize>,
    pub budget_spairs: Option<u64>,
    pub budget_terms: Option<u64>,
}

fn sequence_config(doc: &Document, overrides: &RunOverrides) -> SequenceConfig {
    let mut config = SequenceConfig::default();
    if let Some(n) = doc.job.max_stages {
        config.max_stages = n;
    }
    if let Some(n) = overrides.max_stages {
        config.max_stages = n;
    }
    let mut budget = doc.job.budget();
    if let Some(n) = overrides.budget_spairs {
        budget.max_spairs = n;
    }
    if let Some(n) = overrides.budget_terms {
        budget.max_terms = n;
    }
    config.budget = budget;
    config
}

fn render_stage(stage: &SubalgebraStage, ambient_names: &[String]) -> StageSection {
    let pres_names = stage.presentation.var_names();
    let assignments: Vec<String> = stage
        .presentation_gens
        .iter()
        .enumerate()
        .map(|(i, g)| format!("{} = {}", pres_names[i], g.display(ambient_names)))
        .collect();
    StageSection {
        index: stage.index,
        module_generators: stage
            .module_generators
            .iter()
            .map(|g| format!("{}", g.display(ambient_names)))
            .collect(),
        presentation_variables: assignments,
        presentation_relations: stage
            .presentation
            .relations()
            .iter()
            .map(|r| stage.presentation.render(r))
            .collect(),
    }
}

fn render_sequence(
    result: &gcx_core::canseq::CanonicalSequenceResult,
    ambient_names: &[String],
) -> SequenceSection {
    SequenceSection {
        length: match result.length {
            SeqLength::Resolved(n) => n.to_string(),
            SeqLength::Unresolved { stages_computed } => {
                format!("unresolved (>= {stages_computed})")
            }
        },
        separated: result.separated,
        dominant: result.dominant,
        stages: result
            .stages
            .iter()
            .map(|s| render_stage(s, ambient_names))
            .collect(),
    }
}

/// Build the comparison map of an action relative to the supplied
/// invariants, for the effectivity command.
fn comparison_of_action(
    g: &GroupoidPresentation,
    invariant_gens: &[Polynomial],
    config: &SequenceConfig,
) -> gcx_core::Result<RingMap> {
    let flags = verify_invariants(g, invariant_gens);
    if let Some(idx) = flags.iter().position(|ok| !ok) {
        return Err(Error::NotInvariant { index: idx });
    }
    let names: Vec<String> = (1..=invariant_gens.len()).map(|i| format!("a{i}")).collect();
    let (_a, a_to_b) =
        subalgebra_presentation(&g.base, invariant_gens, &names, &config.budget)?;
    let tensor = tensor_over_base(&a_to_b, &a_to_b, &config.budget)?;
    let nb = g.base.vars();
    let images: Vec<Polynomial> = (0..2 * nb)
        .map(|j| {
            if j < nb {
                g.source_map.images()[j].clone()
            } else {
                g.target_map.images()[j - nb].clone()
            }
        })
        .collect();
    RingMap::new(tensor.ring.clone(), g.arrows.clone(), images, &config.budget)
}

fn parse_invariants(
    doc: &Document,
    base: &gcx_core::rings::PresentedRing,
) -> gcx_core::Result<Vec<Polynomial>> {
    if doc.job.invariants.is_empty() {
        return Err(Error::Validation(
            "this command needs at least one `invariant` line in the job block".into(),
        ));
    }
    doc.job
        .invariants
        .iter()
        .map(|src| base.parse(src))
        .collect()
}

pub fn run(doc: &Document, command: Command, overrides: &RunOverrides) -> (Report, i32) {
    let start = Instant::now();
    let mut report = Report::new(command.name(), doc.field.to_string());
    let code = match dispatch(doc, command, overrides, &mut report) {
        Ok(code) => code,
        Err(e) => {
            report.status = "error".into();
            report.error = Some(e.to_string());
            exit_code_for(&e)
        }
    };
    report.timings.total_ms = start.elapsed().as_millis();
    (report, code)
}

fn dispatch(
    doc: &Document,
    command: Command,
    overrides: &RunOverrides,
    report: &mut Report,
) -> gcx_core::Result<i32> {
    let config = sequence_config(doc, overrides);
    match command {
        Command::Validate => {
            report.validation = Some(ValidationSection {
                rings: doc
                    .rings
                    .iter()
                    .map(|(name, r)| {
                        format!(
                            "{name}: {} variable(s), {} relation(s){}",
                            r.vars(),
                            r.relations().len(),
                            if r.is_zero_ring() { ", zero ring" } else { "" }
                        )
                    })
                    .collect(),
                maps: doc
                    .maps
                    .iter()
                    .map(|(name, _)| format!("{name}: well-defined"))
                    .collect(),
                actions: doc
                    .actions
                    .iter()
                    .map(|(name, a)| match &a.origin {
                        gcx_core::groupoids::GroupOrigin::ConstantGroup {
                            elements, ..
                        } => format!("{name}: constant group of order {}", elements.len()),
                        gcx_core::groupoids::GroupOrigin::Coaction { .. } => {
                            format!("{name}: coaction, axioms verified")
                        }
                    })
                    .collect(),
                modules: doc
                    .modules
                    .iter()
                    .map(|(name, m)| format!("{name}: rank {}", m.rank()))
                    .collect(),
            });
            Ok(EXIT_OK)
        }
        Command::Canseq => {
            let map_name = doc.job.map.as_ref().ok_or_else(|| {
                Error::Validation("canseq needs `map NAME` in the job block".into())
            })?;
            let f = doc.map(map_name)?;
            let result = canonical_sequence(f, &config)?;
            report.dominant = Some(result.dominant);
            report.dominance_witness = result
                .dominance_witness
                .as_ref()
                .map(|w| f.source().render(w));
            let unresolved = matches!(result.length, SeqLength::Unresolved { .. });
            report.sequence = Some(render_sequence(&result, f.target().var_names()));
            if unresolved {
                return Ok(EXIT_RESOURCE);
            }
            Ok(EXIT_OK)
        }
        Command::Effepi => {
            let (f, ambient_owned);
            match (&doc.job.map, &doc.job.action) {
                (Some(name), None) => {
                    f = doc.map(name)?.clone();
                }
                (None, Some(name)) => {
                    let g = doc.action(name)?;
                    let invariant_gens = parse_invariants(doc, &g.base)?;
                    f = comparison_of_action(g, &invariant_gens, &config)?;
                }
                _ => {
                    return Err(Error::Validation(
                        "effepi needs either `map NAME` or `action NAME` with invariants"
                            .into(),
                    ))
                }
            }
            ambient_owned = f.target().var_names().to_vec();
            match is_effective_epi(&f, &config)? {
                Effectivity::Effective => {
                    report.effectivity = Some("effective".into());
                    Ok(EXIT_OK)
                }
                Effectivity::NotEffective { witness } => {
                    report.effectivity = Some("not-effective".into());
                    report.effectivity_witness =
                        Some(format!("{}", witness.display(&ambient_owned)));
                    Ok(EXIT_OK)
                }
                Effectivity::NotDominant { witness } => {
                    report.effectivity = Some("not-dominant".into());
                    report.effectivity_witness = Some(f.source().render(&witness));
                    Ok(EXIT_NOT_DOMINANT)
                }
            }
        }
        Command::Stabilizer => {
            let action_name = doc.job.action.as_ref().ok_or_else(|| {
                Error::Validation("stabilizer needs `action NAME` in the job block".into())
            })?;
            let g = doc.action(action_name)?;
            let stab = stabilizer(g, &config.saturation, &config.budget)?;
            report.stabilizer = Some(StabilizerSection {
                relations: stab
                    .ring
                    .relations()
                    .iter()
                    .map(|r| stab.ring.render(r))
                    .collect(),
                finite: stab.certificate.is_some(),
                module_generators: stab
                    .certificate
                    .as_ref()
                    .map(|c| c.generators.len())
                    .unwrap_or(0),
                trivial: stab.trivial,
            });
            Ok(EXIT_OK)
        }
        Command::Complexity => {
            let action_name = doc.job.action.as_ref().ok_or_else(|| {
                Error::Validation("complexity needs `action NAME` in the job block".into())
            })?;
            let g = doc.action(action_name)?;
            let invariant_gens = parse_invariants(doc, &g.base)?;
            let result = complexity(g, &invariant_gens, &config)?;
            report.invariant_checks = Some(
                doc.job
                    .invariants
                    .iter()
                    .zip(&result.invariant_checks)
                    .map(|(src, &ok)| InvariantCheck {
                        generator: src.clone(),
                        invariant: ok,
                    })
                    .collect(),
            );
            report.dominant = Some(result.dominant);
            report.dominance_witness = result
                .dominance_witness
                .as_ref()
                .map(|w| result.fiber_square.render(w));
            report.stabilizer = Some(StabilizerSection {
                relations: result
                    .stabilizer
                    .ring
                    .relations()
                    .iter()
                    .map(|r| result.stabilizer.ring.render(r))
                    .collect(),
                finite: result.stabilizer.certificate.is_some(),
                module_generators: result
                    .stabilizer
                    .certificate
                    .as_ref()
                    .map(|c| c.generators.len())
                    .unwrap_or(0),
                trivial: result.stabilizer.trivial,
            });
            report.complexity = Some(match &result.complexity {
                ComplexityVerdict::Exactly(n) => n.to_string(),
                ComplexityVerdict::AtLeast(n) => format!("at least {n}"),
                ComplexityVerdict::Undefined { reason } => format!("undefined ({reason})"),
            });
            if let Some(seq) = &result.sequence {
                report.sequence = Some(render_sequence(seq, g.arrows.var_names()));
            }
            report.caveats = result.caveats.iter().map(|c| c.to_string()).collect();
            if !result.dominant {
                return Ok(EXIT_NOT_DOMINANT);
            }
            if matches!(result.complexity, ComplexityVerdict::AtLeast(_)) {
                return Ok(EXIT_RESOURCE);
            }
            Ok(EXIT_OK)
        }
        Command::Invariants => {
            let action_name = doc.job.action.as_ref().ok_or_else(|| {
                Error::Validation("invariants needs `action NAME` in the job block".into())
            })?;
            let g = doc.action(action_name)?;
            let invariant_gens = parse_invariants(doc, &g.base)?;
            let flags = verify_invariants(g, &invariant_gens);
            report.invariant_checks = Some(
                doc.job
                    .invariants
                    .iter()
                    .zip(&flags)
                    .map(|(src, &ok)| InvariantCheck {
                        generator: src.clone(),
                        invariant: ok,
                    })
                    .collect(),
            );
            Ok(EXIT_OK)
        }
        Command::Equivariant => {
            let module_name = doc.job.module.as_ref().ok_or_else(|| {
                Error::Validation("equivariant needs `module NAME` in the job block".into())
            })?;
            let m = doc.module(module_name)?;
            let invariant_gens = parse_invariants(doc, &m.base)?;
            let saturation = SaturationLimits::default();
            let fixed = module_invariants(m, &invariant_gens, &saturation, &config.budget)?;
            let verdict = counit_check(m, &invariant_gens, &saturation, &config.budget)?;
            let render_vector = |v: &[Polynomial]| -> String {
                let parts: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(i, p)| format!("({}) * {}", m.base.render(p), m.labels[i]))
                    .collect();
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join(" + ")
                }
            };
            report.module_invariants =
                Some(fixed.iter().map(|v| render_vector(v)).collect());
            report.counit = Some(CounitSection {
                is_isomorphism: verdict.is_isomorphism,
                invariants_generators: verdict
                    .invariants_generators
                    .iter()
                    .map(|v| render_vector(v))
                    .collect(),
                image_generators: verdict
                    .counit_image
                    .iter()
                    .map(|v| render_vector(v))
                    .collect(),
                cokernel_witness: verdict
                    .cokernel_witness
                    .map(|i| m.labels[i].clone()),
            });
            Ok(EXIT_OK)
        }
    }
}

/// The comparison map of an action relative to supplied invariants, shared
/// with the test suites.
pub fn action_comparison_map(
    g: &GroupoidPresentation,
    invariant_gens: &[Polynomial],
    config: &SequenceConfig,
) -> gcx_core::Result<RingMap> {
    comparison_of_action(g, invariant_gens, config)
}
