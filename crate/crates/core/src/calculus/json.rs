use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{FormulaSet, ProofNode, Rule, RuleTag, Sequent, Split};
use crate::formula::{parse_formula, Formula, ParseError};

#[derive(Debug, Error)]
pub enum ProofJsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("at {path:?}: bad formula {text:?}: {source}")]
    Formula {
        path: Vec<usize>,
        text: String,
        source: ParseError,
    },
    #[error("at {path:?}: unknown rule {name:?}")]
    UnknownRule { path: Vec<usize>, name: String },
    #[error("at {path:?}: missing field {field}")]
    Missing { path: Vec<usize>, field: &'static str },
    #[error("at {path:?}: bad aux data: {message}")]
    BadAux { path: Vec<usize>, message: String },
}

#[derive(Serialize, Deserialize)]
struct SequentRepr {
    ante: Vec<String>,
    succ: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct NodeRepr {
    sequent: SequentRepr,
    rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    principal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aux: Option<Value>,
    #[serde(default)]
    premises: Vec<NodeRepr>,
}

fn strings(set: &FormulaSet) -> Vec<String> {
    set.iter().map(Formula::to_string).collect()
}

fn split_json(split: &Split) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("leftAnte".into(), json!(strings(&split.left_ante)));
    m.insert("leftSucc".into(), json!(strings(&split.left_succ)));
    m
}

fn to_repr(node: &ProofNode) -> NodeRepr {
    let aux = match &node.rule {
        Rule::AndL { i, .. } | Rule::OrR { i, .. } => Some(json!({ "i": i })),
        Rule::ImpL { split, .. } => Some(Value::Object(split_json(split))),
        Rule::Cut { formula, split } => {
            let mut m = split_json(split);
            m.insert("cutFormula".into(), json!(formula.to_string()));
            Some(Value::Object(m))
        }
        _ => None,
    };
    NodeRepr {
        sequent: SequentRepr {
            ante: strings(&node.conclusion.ante),
            succ: strings(&node.conclusion.succ),
        },
        rule: node.rule.tag().name().to_string(),
        principal: node.rule.principal().map(Formula::to_string),
        aux,
        premises: node.premises.iter().map(to_repr).collect(),
    }
}

/// Serialises a proof as JSON text. Formulas use the canonical printer.
pub fn proof_to_json(proof: &ProofNode) -> String {
    serde_json::to_string_pretty(&to_repr(proof)).expect("proof JSON serialisation cannot fail")
}

/// Parses the JSON produced by [`proof_to_json`]. `andL1`/`andL2` and
/// `orR1`/`orR2` are accepted as spellings of the indexed rules.
pub fn proof_from_json(text: &str) -> Result<ProofNode, ProofJsonError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let repr = NodeRepr::deserialize(&mut de)?;
    de.end()?;
    let mut path = Vec::new();
    from_repr(&repr, &mut path)
}

fn formula(text: &str, path: &[usize]) -> Result<Formula, ProofJsonError> {
    parse_formula(text).map_err(|source| ProofJsonError::Formula {
        path: path.to_vec(),
        text: text.to_string(),
        source,
    })
}

fn formula_set(items: &[String], path: &[usize]) -> Result<FormulaSet, ProofJsonError> {
    items.iter().map(|s| formula(s, path)).collect()
}

fn aux_obj<'a>(repr: &'a NodeRepr, path: &[usize]) -> Result<&'a Map<String, Value>, ProofJsonError> {
    match &repr.aux {
        Some(Value::Object(m)) => Ok(m),
        Some(_) => Err(ProofJsonError::BadAux {
            path: path.to_vec(),
            message: "aux must be an object".into(),
        }),
        None => Err(ProofJsonError::Missing {
            path: path.to_vec(),
            field: "aux",
        }),
    }
}

fn aux_formulas(m: &Map<String, Value>, key: &'static str, path: &[usize]) -> Result<FormulaSet, ProofJsonError> {
    let Some(v) = m.get(key) else {
        return Err(ProofJsonError::Missing {
            path: path.to_vec(),
            field: key,
        });
    };
    let items: Vec<String> = serde_json::from_value(v.clone()).map_err(|e| ProofJsonError::BadAux {
        path: path.to_vec(),
        message: format!("{key}: {e}"),
    })?;
    formula_set(&items, path)
}

fn aux_split(repr: &NodeRepr, path: &[usize]) -> Result<Split, ProofJsonError> {
    let m = aux_obj(repr, path)?;
    Ok(Split {
        left_ante: aux_formulas(m, "leftAnte", path)?,
        left_succ: aux_formulas(m, "leftSucc", path)?,
    })
}

fn aux_index(repr: &NodeRepr, path: &[usize]) -> Result<u8, ProofJsonError> {
    let m = aux_obj(repr, path)?;
    match m.get("i").and_then(Value::as_u64) {
        Some(i @ (1 | 2)) => Ok(i as u8),
        Some(_) => Err(ProofJsonError::BadAux {
            path: path.to_vec(),
            message: "i must be 1 or 2".into(),
        }),
        None => Err(ProofJsonError::Missing {
            path: path.to_vec(),
            field: "i",
        }),
    }
}

fn from_repr(repr: &NodeRepr, path: &mut Vec<usize>) -> Result<ProofNode, ProofJsonError> {
    let conclusion = Sequent {
        ante: formula_set(&repr.sequent.ante, path)?,
        succ: formula_set(&repr.sequent.succ, path)?,
    };
    let (name, index) = match repr.rule.as_str() {
        "andL1" => ("andL", Some(1)),
        "andL2" => ("andL", Some(2)),
        "orR1" => ("orR", Some(1)),
        "orR2" => ("orR", Some(2)),
        other => (other, None),
    };
    let Some(tag) = RuleTag::from_name(name) else {
        return Err(ProofJsonError::UnknownRule {
            path: path.clone(),
            name: repr.rule.clone(),
        });
    };
    let principal = || -> Result<Formula, ProofJsonError> {
        match &repr.principal {
            Some(s) => formula(s, path),
            None => Err(ProofJsonError::Missing {
                path: path.clone(),
                field: "principal",
            }),
        }
    };
    let index = || match index {
        Some(i) => Ok(i),
        None => aux_index(repr, path),
    };
    let rule = match tag {
        RuleTag::Init => Rule::Init,
        RuleTag::InitBot => Rule::InitBot,
        RuleTag::AndL => Rule::AndL {
            principal: principal()?,
            i: index()?,
        },
        RuleTag::OrR => Rule::OrR {
            principal: principal()?,
            i: index()?,
        },
        RuleTag::AndR => Rule::AndR { principal: principal()? },
        RuleTag::OrL => Rule::OrL { principal: principal()? },
        RuleTag::ImpR => Rule::ImpR { principal: principal()? },
        RuleTag::ImpL => Rule::ImpL {
            principal: principal()?,
            split: aux_split(repr, path)?,
        },
        RuleTag::WL => Rule::WL { principal: principal()? },
        RuleTag::WR => Rule::WR { principal: principal()? },
        RuleTag::Cut => {
            let m = aux_obj(repr, path)?;
            let text = match (m.get("cutFormula").and_then(Value::as_str), &repr.principal) {
                (Some(s), _) => s.to_string(),
                (None, Some(s)) => s.clone(),
                (None, None) => {
                    return Err(ProofJsonError::Missing {
                        path: path.clone(),
                        field: "cutFormula",
                    })
                }
            };
            Rule::Cut {
                formula: formula(&text, path)?,
                split: aux_split(repr, path)?,
            }
        }
        RuleTag::Nec => Rule::Nec,
        RuleTag::AccL => Rule::AccL { principal: principal()? },
        RuleTag::AccR => Rule::AccR { principal: principal()? },
        RuleTag::RosBox => Rule::RosBox,
        RuleTag::Ros => Rule::Ros,
    };
    let mut premises = Vec::with_capacity(repr.premises.len());
    for (i, p) in repr.premises.iter().enumerate() {
        path.push(i);
        premises.push(from_repr(p, path)?);
        path.pop();
    }
    Ok(ProofNode {
        conclusion,
        rule,
        premises,
    })
}
