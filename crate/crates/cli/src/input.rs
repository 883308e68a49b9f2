//! Parser for the job document format.
//!
//! A document declares a coefficient field, then rings, maps, actions and
//! modules (each name must be declared before use), and finally one `job`
//! block naming the command and its parameters. Polynomials are written in
//! the expression grammar of the engine; `#` starts a comment.
//!
//! ```text
//! field QQ                    # or GF(p)
//!
//! ring B
//!   vars x y
//!   rel y^3 - x^4             # zero or more
//! end
//!
//! map f : A -> B
//!   x -> t^3                  # one line per source variable
//! end
//!
//! action G on B               # constant group: closure of listed maps
//!   generators f g
//! end
//!
//! action G on B               # group-scheme coaction
//!   hopf H
//!     comul z -> z * z'      # in the variables of H ⊗ H
//!     counit z -> 1
//!     antipode z -> z^2
//!   coaction x -> x * z      # in the variables of B ⊗ H
//! end
//!
//! module L on B rank 1
//!   labels e
//!   matrix f                 # one block per generating automorphism
//!     e -> (1 + eps) * e
//!   end
//! end
//!
//! job complexity
//!   action G
//!   invariant x^2
//!   max-stages 8
//! end
//! ```

use gcx_core::equivariant::EquivariantModule;
use gcx_core::field::Field;
use gcx_core::groebner::Budget;
use gcx_core::groupoids::{
    action_from_automorphisms, action_from_coaction, GroupoidPresentation, HopfData,
};
use gcx_core::parse::parse_polynomial;
use gcx_core::poly::Polynomial;
use gcx_core::rings::{tensor_variable_names, PresentedRing, RingMap};
use gcx_core::{Error, Result};

pub const GROUP_CLOSURE_CAP: usize = 1024;

#[derive(Debug, Default, Clone)]
pub struct JobBlock {
    pub command: Option<String>,
    pub map: Option<String>,
    pub action: Option<String>,
    pub module: Option<String>,
    pub invariants: Vec<String>,
    pub max_stages: Option<usize>,
    pub budget_spairs: Option<u64>,
    pub budget_terms: Option<u64>,
}

pub struct Document {
    pub field: Field,
    pub rings: Vec<(String, PresentedRing)>,
    pub maps: Vec<(String, RingMap)>,
    pub actions: Vec<(String, GroupoidPresentation)>,
    pub modules: Vec<(String, EquivariantModule)>,
    pub job: JobBlock,
}

impl Document {
    pub fn ring(&self, name: &str) -> Result<&PresentedRing> {
        self.rings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r)
            .ok_or_else(|| Error::Validation(format!("ring `{name}` is not declared")))
    }

    pub fn map(&self, name: &str) -> Result<&RingMap> {
        self.maps
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::Validation(format!("map `{name}` is not declared")))
    }

    pub fn action(&self, name: &str) -> Result<&GroupoidPresentation> {
        self.actions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| a)
            .ok_or_else(|| Error::Validation(format!("action `{name}` is not declared")))
    }

    pub fn module(&self, name: &str) -> Result<&EquivariantModule> {
        self.modules
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::Validation(format!("module `{name}` is not declared")))
    }
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(src: &'a str) -> Self {
        let lines = src
            .lines()
            .enumerate()
            .map(|(i, raw)| {
                let body = match raw.find('#') {
                    Some(k) => &raw[..k],
                    None => raw,
                };
                (i + 1, body.trim())
            })
            .filter(|(_, body)| !body.is_empty())
            .collect();
        Lines { lines, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.peek();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Validation(format!("line {line}: {}", msg.into()))
}

fn expect_end(lines: &mut Lines, what: &str) -> Result<()> {
    match lines.next() {
        Some((_, "end")) => Ok(()),
        Some((n, other)) => Err(err(n, format!("expected `end` of {what}, found `{other}`"))),
        None => Err(Error::Validation(format!("unterminated {what} block"))),
    }
}

/// Parse an arrow line `lhs -> rhs`, returning both sides trimmed.
fn split_arrow(line: usize, body: &str) -> Result<(String, String)> {
    let Some((lhs, rhs)) = body.split_once("->") else {
        return Err(err(line, "expected `name -> expression`"));
    };
    Ok((lhs.trim().to_string(), rhs.trim().to_string()))
}

pub fn parse_document(src: &str, budget: &Budget) -> Result<Document> {
    let mut lines = Lines::new(src);

    // field line first
    let Some((n, first)) = lines.next() else {
        return Err(Error::Validation("empty document".into()));
    };
    let field = match first.strip_prefix("field") {
        Some(rest) => parse_field(n, rest.trim())?,
        None => return Err(err(n, "document must start with a `field` line")),
    };

    let mut doc = Document {
        field,
        rings: Vec::new(),
        maps: Vec::new(),
        actions: Vec::new(),
        modules: Vec::new(),
        job: JobBlock::default(),
    };
    let mut saw_job = false;

    while let Some((n, line)) = lines.next() {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("ring") => {
                let name = words
                    .next()
                    .ok_or_else(|| err(n, "ring declaration needs a name"))?
                    .to_string();
                if words.next().is_some() {
                    return Err(err(n, "unexpected tokens after ring name"));
                }
                let ring = parse_ring_block(&mut lines, field, budget)?;
                if doc.rings.iter().any(|(existing, _)| *existing == name) {
                    return Err(err(n, format!("ring `{name}` declared twice")));
                }
                doc.rings.push((name, ring));
            }
            Some("map") => {
                let rest: Vec<&str> = line["map".len()..].trim().split(':').collect();
                if rest.len() != 2 {
                    return Err(err(n, "expected `map NAME : SRC -> DST`"));
                }
                let name = rest[0].trim().to_string();
                let (src_name, dst_name) = {
                    let Some((s, d)) = rest[1].split_once("->") else {
                        return Err(err(n, "expected `map NAME : SRC -> DST`"));
                    };
                    (s.trim().to_string(), d.trim().to_string())
                };
                let map = parse_map_block(&mut lines, &doc, &src_name, &dst_name, budget)?;
                doc.maps.push((name, map));
            }
            Some("action") => {
                let name = words
                    .next()
                    .ok_or_else(|| err(n, "action declaration needs a name"))?
                    .to_string();
                if words.next() != Some("on") {
                    return Err(err(n, "expected `action NAME on RING`"));
                }
                let ring_name = words
                    .next()
                    .ok_or_else(|| err(n, "expected the base ring name"))?;
                let base = doc.ring(ring_name)?.clone();
                let action = parse_action_block(&mut lines, &doc, &base, budget)?;
                doc.actions.push((name, action));
            }
            Some("module") => {
                let name = words
                    .next()
                    .ok_or_else(|| err(n, "module declaration needs a name"))?
                    .to_string();
                if words.next() != Some("on") {
                    return Err(err(n, "expected `module NAME on RING rank N`"));
                }
                let ring_name = words
                    .next()
                    .ok_or_else(|| err(n, "expected the base ring name"))?;
                if words.next() != Some("rank") {
                    return Err(err(n, "expected `rank N`"));
                }
                let rank: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(n, "malformed rank"))?;
                let base = doc.ring(ring_name)?.clone();
                let module = parse_module_block(&mut lines, &doc, base, rank, budget)?;
                doc.modules.push((name, module));
            }
            Some("job") => {
                if saw_job {
                    return Err(err(n, "only one job block is allowed"));
                }
                let command = words.next().map(|w| w.to_string());
                doc.job = parse_job_block(&mut lines, command)?;
                saw_job = true;
            }
            Some(other) => {
                return Err(err(n, format!("unknown declaration `{other}`")));
            }
            None => unreachable!(),
        }
    }
    Ok(doc)
}

fn parse_field(line: usize, text: &str) -> Result<Field> {
    if text == "QQ" {
        return Ok(Field::Rationals);
    }
    if let Some(inner) = text.strip_prefix("GF(").and_then(|t| t.strip_suffix(')')) {
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| err(line, "malformed prime field modulus"))?;
        return Field::prime(p);
    }
    Err(err(line, "field must be `QQ` or `GF(p)`"))
}

fn parse_ring_block(lines: &mut Lines, field: Field, budget: &Budget) -> Result<PresentedRing> {
    let mut names: Option<Vec<String>> = None;
    let mut rels: Vec<String> = Vec::new();
    loop {
        let Some((n, line)) = lines.next() else {
            return Err(Error::Validation("unterminated ring block".into()));
        };
        if line == "end" {
            break;
        }
        if let Some(rest) = line.strip_prefix("vars") {
            if names.is_some() {
                return Err(err(n, "duplicate `vars` line"));
            }
            let list: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
            if list.is_empty() {
                return Err(err(n, "at least one variable required"));
            }
            names = Some(list);
        } else if let Some(rest) = line.strip_prefix("rel") {
            rels.push(rest.trim().to_string());
        } else {
            return Err(err(n, format!("unexpected line in ring block: `{line}`")));
        }
    }
    let names = names.ok_or_else(|| Error::Validation("ring block without `vars`".into()))?;
    let polys: Vec<Polynomial> = rels
        .iter()
        .map(|src| parse_polynomial(src, field, &names))
        .collect::<Result<Vec<_>>>()?;
    PresentedRing::new(field, names, &polys, budget)
}

fn parse_map_block(
    lines: &mut Lines,
    doc: &Document,
    src_name: &str,
    dst_name: &str,
    budget: &Budget,
) -> Result<RingMap> {
    let source = doc.ring(src_name)?.clone();
    let target = doc.ring(dst_name)?.clone();
    let mut images: Vec<Option<Polynomial>> = vec![None; source.vars()];
    loop {
        let Some((n, line)) = lines.next() else {
            return Err(Error::Validation("unterminated map block".into()));
        };
        if line == "end" {
            break;
        }
        let (lhs, rhs) = split_arrow(n, line)?;
        let Some(idx) = source.var_names().iter().position(|v| *v == lhs) else {
            return Err(err(n, format!("`{lhs}` is not a variable of `{src_name}`")));
        };
        if images[idx].is_some() {
            return Err(err(n, format!("duplicate image for `{lhs}`")));
        }
        images[idx] = Some(target.parse(&rhs)?);
    }
    let images: Vec<Polynomial> = images
        .into_iter()
        .enumerate()
        .map(|(i, im)| {
            im.ok_or_else(|| {
                Error::Validation(format!(
                    "missing image for variable `{}`",
                    source.var_names()[i]
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    RingMap::new(source, target, images, budget)
}

fn parse_action_block(
    lines: &mut Lines,
    doc: &Document,
    base: &PresentedRing,
    budget: &Budget,
) -> Result<GroupoidPresentation> {
    let Some((n, line)) = lines.next() else {
        return Err(Error::Validation("unterminated action block".into()));
    };
    if let Some(rest) = line.strip_prefix("generators") {
        let mut autos = Vec::new();
        for name in rest.split_whitespace() {
            let m = doc.map(name)?;
            if m.source() != base || m.target() != base {
                return Err(err(
                    n,
                    format!("map `{name}` is not an endomap of the base ring"),
                ));
            }
            autos.push(m.clone());
        }
        expect_end(lines, "action")?;
        return action_from_automorphisms(base, &autos, GROUP_CLOSURE_CAP, budget);
    }
    if let Some(rest) = line.strip_prefix("hopf") {
        let hopf_ring = doc.ring(rest.trim())?.clone();
        let square_names =
            tensor_variable_names(hopf_ring.var_names(), hopf_ring.var_names());
        let nh = hopf_ring.vars();
        let field = base.field();
        let mut comul: Vec<Option<Polynomial>> = vec![None; nh];
        let mut counit: Vec<Option<Polynomial>> = vec![None; nh];
        let mut antipode: Vec<Option<Polynomial>> = vec![None; nh];
        let mut coaction: Vec<Option<Polynomial>> = vec![None; base.vars()];
        let c_names = tensor_variable_names(base.var_names(), hopf_ring.var_names());
        loop {
            let Some((n, line)) = lines.next() else {
                return Err(Error::Validation("unterminated action block".into()));
            };
            if line == "end" {
                break;
            }
            let store = |slot: &mut Vec<Option<Polynomial>>,
                         names: &[String],
                         parse_names: &[String],
                         n: usize,
                         body: &str|
             -> Result<()> {
                let (lhs, rhs) = split_arrow(n, body)?;
                let Some(idx) = names.iter().position(|v| *v == lhs) else {
                    return Err(err(n, format!("`{lhs}` is not a generator")));
                };
                if slot[idx].is_some() {
                    return Err(err(n, format!("duplicate line for `{lhs}`")));
                }
                slot[idx] = Some(parse_polynomial(rhs.as_str(), field, parse_names)?);
                Ok(())
            };
            if let Some(rest) = line.strip_prefix("comul") {
                store(&mut comul, hopf_ring.var_names(), &square_names, n, rest)?;
            } else if let Some(rest) = line.strip_prefix("counit") {
                store(&mut counit, hopf_ring.var_names(), &[], n, rest)?;
            } else if let Some(rest) = line.strip_prefix("antipode") {
                store(
                    &mut antipode,
                    hopf_ring.var_names(),
                    hopf_ring.var_names(),
                    n,
                    rest,
                )?;
            } else if let Some(rest) = line.strip_prefix("coaction") {
                store(&mut coaction, base.var_names(), &c_names, n, rest)?;
            } else {
                return Err(err(n, format!("unexpected line in action block: `{line}`")));
            }
        }
        let unwrap_all = |slot: Vec<Option<Polynomial>>, what: &str| -> Result<Vec<Polynomial>> {
            slot.into_iter()
                .enumerate()
                .map(|(i, p)| {
                    p.ok_or_else(|| {
                        Error::Validation(format!("missing {what} image #{i}"))
                    })
                })
                .collect()
        };
        let hopf = HopfData::new(
            hopf_ring,
            unwrap_all(comul, "comultiplication")?,
            unwrap_all(counit, "counit")?,
            unwrap_all(antipode, "antipode")?,
            budget,
        )?;
        return action_from_coaction(base, hopf, unwrap_all(coaction, "coaction")?, budget);
    }
    Err(err(
        n,
        "action block must start with `generators …` or `hopf RING`",
    ))
}

/// Decompose an expression linear in the labels into one coefficient per
/// label. The expression is parsed in the ambient variables extended by the
/// labels.
fn parse_label_linear(
    src: &str,
    field: Field,
    ambient_names: &[String],
    labels: &[String],
) -> Result<Vec<Polynomial>> {
    let mut extended = ambient_names.to_vec();
    extended.extend(labels.iter().cloned());
    let p = parse_polynomial(src, field, &extended)?;
    let na = ambient_names.len();
    let mut out: Vec<Vec<(gcx_core::field::Coeff, gcx_core::monomial::Monomial)>> =
        vec![Vec::new(); labels.len()];
    for t in p.terms() {
        let label_part = &t.mono.0[na..];
        let mut hits = label_part
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .collect::<Vec<_>>();
        if hits.len() != 1 || *hits[0].1 != 1 {
            return Err(Error::Validation(format!(
                "`{src}` is not linear in the module labels"
            )));
        }
        let (label_idx, _) = hits.pop().unwrap();
        out[label_idx].push((
            t.coeff.clone(),
            gcx_core::monomial::Monomial(t.mono.0[..na].to_vec()),
        ));
    }
    Ok(out
        .into_iter()
        .map(|terms| Polynomial::from_terms(field, na, terms))
        .collect())
}

fn parse_module_block(
    lines: &mut Lines,
    doc: &Document,
    base: PresentedRing,
    rank: usize,
    budget: &Budget,
) -> Result<EquivariantModule> {
    let field = base.field();
    let mut labels: Option<Vec<String>> = None;
    let mut matrix_blocks: Vec<(RingMap, Vec<Vec<Polynomial>>)> = Vec::new();
    let mut comodule_block: Option<(String, Vec<Vec<Polynomial>>)> = None;
    loop {
        let Some((n, line)) = lines.next() else {
            return Err(Error::Validation("unterminated module block".into()));
        };
        if line == "end" {
            break;
        }
        if let Some(rest) = line.strip_prefix("labels") {
            let list: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
            if list.len() != rank {
                return Err(err(n, format!("expected {rank} labels")));
            }
            labels = Some(list);
        } else if let Some(rest) = line.strip_prefix("matrix") {
            let map = doc.map(rest.trim())?.clone();
            let labels = labels
                .as_ref()
                .ok_or_else(|| err(n, "`labels` must precede `matrix`"))?;
            let mut cols: Vec<Option<Vec<Polynomial>>> = vec![None; rank];
            loop {
                let Some((m, inner)) = lines.next() else {
                    return Err(Error::Validation("unterminated matrix block".into()));
                };
                if inner == "end" {
                    break;
                }
                let (lhs, rhs) = split_arrow(m, inner)?;
                let Some(idx) = labels.iter().position(|l| *l == lhs) else {
                    return Err(err(m, format!("`{lhs}` is not a module label")));
                };
                cols[idx] = Some(parse_label_linear(
                    &rhs,
                    field,
                    base.var_names(),
                    labels,
                )?);
            }
            let cols: Vec<Vec<Polynomial>> = cols
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    c.ok_or_else(|| {
                        Error::Validation(format!("missing matrix image for `{}`", labels[i]))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            matrix_blocks.push((map, cols));
        } else if let Some(rest) = line.strip_prefix("comodule") {
            let action_name = rest
                .trim()
                .strip_prefix("of")
                .map(|s| s.trim().to_string())
                .ok_or_else(|| err(n, "expected `comodule of ACTION`"))?;
            let labels = labels
                .as_ref()
                .ok_or_else(|| err(n, "`labels` must precede `comodule`"))?;
            let action = doc.action(&action_name)?;
            let arrow_names = action.arrows.var_names().to_vec();
            let mut cols: Vec<Option<Vec<Polynomial>>> = vec![None; rank];
            loop {
                let Some((m, inner)) = lines.next() else {
                    return Err(Error::Validation("unterminated comodule block".into()));
                };
                if inner == "end" {
                    break;
                }
                let (lhs, rhs) = split_arrow(m, inner)?;
                let Some(idx) = labels.iter().position(|l| *l == lhs) else {
                    return Err(err(m, format!("`{lhs}` is not a module label")));
                };
                cols[idx] = Some(parse_label_linear(&rhs, field, &arrow_names, labels)?);
            }
            let cols: Vec<Vec<Polynomial>> = cols
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    c.ok_or_else(|| {
                        Error::Validation(format!("missing comodule image for `{}`", labels[i]))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            comodule_block = Some((action_name, cols));
        } else {
            return Err(err(n, format!("unexpected line in module block: `{line}`")));
        }
    }
    let labels =
        labels.ok_or_else(|| Error::Validation("module block without `labels`".into()))?;
    match (matrix_blocks.is_empty(), comodule_block) {
        (false, None) => EquivariantModule::from_matrices(
            base,
            labels,
            matrix_blocks,
            GROUP_CLOSURE_CAP,
            budget,
        ),
        (true, Some((action_name, cols))) => {
            let action = doc.action(&action_name)?;
            let gcx_core::groupoids::GroupOrigin::Coaction { hopf } = &action.origin else {
                return Err(Error::Validation(format!(
                    "action `{action_name}` is not a coaction"
                )));
            };
            EquivariantModule::from_comodule(
                base,
                labels,
                hopf.clone(),
                action.target_map.clone(),
                cols,
                budget,
            )
        }
        (true, None) => Err(Error::Validation(
            "module block needs `matrix` blocks or a `comodule` block".into(),
        )),
        (false, Some(_)) => Err(Error::Validation(
            "module block cannot mix `matrix` and `comodule`".into(),
        )),
    }
}

fn parse_job_block(lines: &mut Lines, command: Option<String>) -> Result<JobBlock> {
    let mut job = JobBlock {
        command,
        ..Default::default()
    };
    loop {
        let Some((n, line)) = lines.next() else {
            return Err(Error::Validation("unterminated job block".into()));
        };
        if line == "end" {
            break;
        }
        let (key, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match key {
            "map" => job.map = Some(rest.to_string()),
            "action" => job.action = Some(rest.to_string()),
            "module" => job.module = Some(rest.to_string()),
            "invariant" => job.invariants.push(rest.to_string()),
            "max-stages" => {
                job.max_stages =
                    Some(rest.parse().map_err(|_| err(n, "malformed max-stages"))?)
            }
            "budget-spairs" => {
                job.budget_spairs =
                    Some(rest.parse().map_err(|_| err(n, "malformed budget-spairs"))?)
            }
            "budget-terms" => {
                job.budget_terms =
                    Some(rest.parse().map_err(|_| err(n, "malformed budget-terms"))?)
            }
            other => return Err(err(n, format!("unknown job parameter `{other}`"))),
        }
    }
    Ok(job)
}

impl JobBlock {
    pub fn budget(&self) -> Budget {
        let default = Budget::default();
        Budget {
            max_spairs: self.budget_spairs.unwrap_or(default.max_spairs),
            max_terms: self.budget_terms.unwrap_or(default.max_terms),
        }
    }
}
