//! The report emitted for every job: a stable, deterministic rendering of
//! the verdict payloads plus an isolated timings section. Two runs of the
//! same job produce byte-identical output outside the timings block.

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub field: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominant: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominance_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilizer: Option<StabilizerSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effectivity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effectivity_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complexity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_checks: Option<Vec<InvariantCheck>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module_invariants: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counit: Option<CounitSection>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub caveats: Vec<String>,
    pub timings: Timings,
}

#[derive(Debug, Serialize)]
pub struct ValidationSection {
    pub rings: Vec<String>,
    pub maps: Vec<String>,
    pub actions: Vec<String>,
    pub modules: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct StabilizerSection {
    pub relations: Vec<String>,
    pub finite: bool,
    pub module_generators: usize,
    pub trivial: bool,
}

#[derive(Debug, Serialize)]
pub struct SequenceSection {
    pub length: String,
    pub separated: bool,
    pub dominant: bool,
    pub stages: Vec<StageSection>,
}

#[derive(Debug, Serialize)]
pub struct StageSection {
    pub index: usize,
    pub module_generators: Vec<String>,
    pub presentation_variables: Vec<String>,
    pub presentation_relations: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct InvariantCheck {
    pub generator: String,
    pub invariant: bool,
}

#[derive(Debug, Serialize)]
pub struct CounitSection {
    pub is_isomorphism: bool,
    pub invariants_generators: Vec<String>,
    pub image_generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cokernel_witness: Option<String>,
}

#[derive(Debug, Serialize, Default)]
pub struct Timings {
    pub total_ms: u128,
}

impl Report {
    pub fn new(command: &str, field: String) -> Report {
        Report {
            command: command.to_string(),
            field,
            status: "ok".into(),
            error: None,
            validation: None,
            dominant: None,
            dominance_witness: None,
            stabilizer: None,
            effectivity: None,
            effectivity_witness: None,
            complexity: None,
            sequence: None,
            invariant_checks: None,
            module_invariants: None,
            counit: None,
            caveats: Vec::new(),
            timings: Timings::default(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line("gcx report".into());
        line(format!("command: {}", self.command));
        line(format!("field: {}", self.field));
        line(format!("status: {}", self.status));
        if let Some(e) = &self.error {
            line(format!("error: {e}"));
        }
        if let Some(v) = &self.validation {
            line("declarations:".into());
            for r in &v.rings {
                line(format!("  ring {r}"));
            }
            for m in &v.maps {
                line(format!("  map {m}"));
            }
            for a in &v.actions {
                line(format!("  action {a}"));
            }
            for m in &v.modules {
                line(format!("  module {m}"));
            }
        }
        if let Some(d) = self.dominant {
            line(format!("dominant: {}", yesno(d)));
        }
        if let Some(w) = &self.dominance_witness {
            line(format!("dominance-witness: {w}"));
        }
        if let Some(s) = &self.stabilizer {
            line("stabilizer:".into());
            line(format!("  relations: {}", s.relations.join(", ")));
            line(format!("  finite-over-base: {}", yesno(s.finite)));
            line(format!("  module-generators: {}", s.module_generators));
            line(format!("  trivial: {}", yesno(s.trivial)));
        }
        if let Some(e) = &self.effectivity {
            line(format!("effectivity: {e}"));
        }
        if let Some(w) = &self.effectivity_witness {
            line(format!("effectivity-witness: {w}"));
        }
        if let Some(c) = &self.complexity {
            line(format!("complexity: {c}"));
        }
        if let Some(seq) = &self.sequence {
            line("canonical-sequence:".into());
            line(format!("  length: {}", seq.length));
            line(format!("  separated: {}", yesno(seq.separated)));
            line(format!("  dominant: {}", yesno(seq.dominant)));
            for stage in &seq.stages {
                line(format!("  stage {}:", stage.index));
                line(format!(
                    "    module-generators: {}",
                    stage.module_generators.join(", ")
                ));
                line(format!(
                    "    presentation-variables: {}",
                    if stage.presentation_variables.is_empty() {
                        "-".to_string()
                    } else {
                        stage.presentation_variables.join(", ")
                    }
                ));
                line(format!(
                    "    presentation-relations: {}",
                    if stage.presentation_relations.is_empty() {
                        "0".to_string()
                    } else {
                        stage.presentation_relations.join(", ")
                    }
                ));
            }
        }
        if let Some(checks) = &self.invariant_checks {
            line("invariant-checks:".into());
            for c in checks {
                line(format!("  {}: {}", c.generator, yesno(c.invariant)));
            }
        }
        if let Some(invs) = &self.module_invariants {
            line("module-invariants:".into());
            for v in invs {
                line(format!("  {v}"));
            }
        }
        if let Some(c) = &self.counit {
            line("counit:".into());
            line(format!("  isomorphism: {}", yesno(c.is_isomorphism)));
            line(format!(
                "  invariants-generators: {}",
                c.invariants_generators.join(", ")
            ));
            line(format!(
                "  image-generators: {}",
                c.image_generators.join(", ")
            ));
            if let Some(w) = &c.cokernel_witness {
                line(format!("  cokernel-witness: {w}"));
            }
        }
        if !self.caveats.is_empty() {
            line("caveats:".into());
            for c in &self.caveats {
                line(format!("  - {c}"));
            }
        }
        line("timings:".into());
        line(format!("  total-ms: {}", self.timings.total_ms));
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Drop the timings section for golden comparisons.
pub fn strip_timings(text: &str) -> String {
    match text.find("\ntimings:") {
        Some(k) => text[..k + 1].to_string(),
        None => text.to_string(),
    }
}
