//! Grounding of parsed schemas over problem objects.
//!
//! Predicates that never occur in an effect are static: they are evaluated
//! against the initial state while enumerating assignments and do not become
//! fluents. The fluent universe is every instantiation of a non-static
//! predicate whose arguments are pairwise distinct, plus any atom named in
//! `:init` or `:goal`. Ground actions that mention an atom outside that
//! universe are dropped, as are assignments violating a static precondition.
//! An atom both added and deleted by one ground action is kept as added.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::ast::{ActionSchema, Atom, DomainAst, ProblemAst};
use crate::model::{GroundAction, ModelError, StripsTask};

pub const DEFAULT_GROUNDING_CAP: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum GroundError {
    #[error("grounding produced more than {cap} actions")]
    Blowup { cap: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn ground(d: &DomainAst, p: &ProblemAst) -> Result<StripsTask, GroundError> {
    ground_with_cap(d, p, DEFAULT_GROUNDING_CAP)
}

fn fluent_name(pred: &str, args: &[&str]) -> String {
    if args.is_empty() {
        pred.to_string()
    } else {
        format!("{}({})", pred, args.join(","))
    }
}

fn all_distinct(args: &[&str]) -> bool {
    args.iter().enumerate().all(|(i, a)| !args[..i].contains(a))
}

struct Grounder<'a> {
    objects: Vec<&'a str>,
    statics: HashSet<&'a str>,
    static_facts: HashSet<(String, Vec<&'a str>)>,
    fluent_index: HashMap<String, usize>,
}

impl<'a> Grounder<'a> {
    fn resolve(atom: &'a Atom, binding: &HashMap<&str, &'a str>) -> Option<Vec<&'a str>> {
        atom.args
            .iter()
            .map(|a| {
                if a.starts_with('?') {
                    binding.get(a.as_str()).copied()
                } else {
                    Some(a.as_str())
                }
            })
            .collect()
    }

    /// False if some fully bound atom already rules the assignment out.
    fn consistent(&self, schema: &'a ActionSchema, binding: &HashMap<&str, &'a str>) -> bool {
        for atom in &schema.precondition {
            if let Some(args) = Self::resolve(atom, binding) {
                if self.statics.contains(atom.predicate.as_str()) {
                    if !self.static_facts.contains(&(atom.predicate.clone(), args)) {
                        return false;
                    }
                } else if !self.fluent_index.contains_key(&fluent_name(&atom.predicate, &args)) {
                    return false;
                }
            }
        }
        for atom in schema.add.iter().chain(&schema.delete) {
            if let Some(args) = Self::resolve(atom, binding) {
                if !self.fluent_index.contains_key(&fluent_name(&atom.predicate, &args)) {
                    return false;
                }
            }
        }
        true
    }

    fn ids(&self, atoms: &'a [Atom], binding: &HashMap<&str, &'a str>) -> Vec<usize> {
        atoms
            .iter()
            .filter(|a| !self.statics.contains(a.predicate.as_str()))
            .map(|a| {
                let args = Self::resolve(a, binding).expect("fully bound");
                self.fluent_index[&fluent_name(&a.predicate, &args)]
            })
            .collect()
    }

    fn enumerate(
        &self,
        schema: &'a ActionSchema,
        depth: usize,
        binding: &mut HashMap<&'a str, &'a str>,
        out: &mut Vec<GroundAction>,
        cap: usize,
    ) -> Result<(), GroundError> {
        if !self.consistent(schema, binding) {
            return Ok(());
        }
        if depth == schema.parameters.len() {
            if out.len() >= cap {
                return Err(GroundError::Blowup { cap });
            }
            let args: Vec<&str> = schema.parameters.iter().map(|p| binding[p.as_str()]).collect();
            let name = if args.is_empty() {
                format!("({})", schema.name)
            } else {
                format!("({} {})", schema.name, args.join(" "))
            };
            let add = self.ids(&schema.add, binding);
            let del: Vec<_> = self
                .ids(&schema.delete, binding)
                .into_iter()
                .filter(|d| !add.contains(d))
                .collect();
            out.push(GroundAction::new(out.len(), name, self.ids(&schema.precondition, binding), add, del));
            return Ok(());
        }
        let param = schema.parameters[depth].as_str();
        for &o in &self.objects {
            binding.insert(param, o);
            self.enumerate(schema, depth + 1, binding, out, cap)?;
        }
        binding.remove(param);
        Ok(())
    }
}

fn tuples<'a>(objects: &[&'a str], arity: usize) -> Vec<Vec<&'a str>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                objects.iter().map(move |&o| {
                    let mut t = prefix.clone();
                    t.push(o);
                    t
                })
            })
            .collect();
    }
    out
}

/// Grounds `p` against `d`, failing once more than `cap` ground actions
/// have been produced.
pub fn ground_with_cap(d: &DomainAst, p: &ProblemAst, cap: usize) -> Result<StripsTask, GroundError> {
    let objects: Vec<&str> = d
        .constants
        .iter()
        .chain(&p.objects)
        .map(String::as_str)
        .collect();
    let fluent_preds: HashSet<&str> = d
        .actions
        .iter()
        .flat_map(|a| a.add.iter().chain(&a.delete))
        .map(|a| a.predicate.as_str())
        .collect();
    let statics: HashSet<&str> = d
        .predicates
        .iter()
        .map(|p| p.name.as_str())
        .filter(|n| !fluent_preds.contains(n))
        .collect();
    let static_facts = p
        .init
        .iter()
        .filter(|a| statics.contains(a.predicate.as_str()))
        .map(|a| (a.predicate.clone(), a.args.iter().map(String::as_str).collect()))
        .collect();

    let mut names = Vec::new();
    let mut fluent_index = HashMap::new();
    let mut intern = |name: String, names: &mut Vec<String>| -> usize {
        *fluent_index.entry(name.clone()).or_insert_with(|| {
            names.push(name);
            names.len() - 1
        })
    };
    for pred in d.predicates.iter().filter(|p| !statics.contains(p.name.as_str())) {
        for args in tuples(&objects, pred.arity()) {
            if all_distinct(&args) {
                intern(fluent_name(&pred.name, &args), &mut names);
            }
        }
    }
    let mut init = Vec::new();
    for a in &p.init {
        if !statics.contains(a.predicate.as_str()) {
            let args: Vec<&str> = a.args.iter().map(String::as_str).collect();
            init.push(intern(fluent_name(&a.predicate, &args), &mut names));
        }
    }
    let mut goal = Vec::new();
    for a in &p.goal {
        let args: Vec<&str> = a.args.iter().map(String::as_str).collect();
        if statics.contains(a.predicate.as_str()) {
            let holds = p.init.iter().any(|i| i == a);
            if holds {
                continue;
            }
        }
        goal.push(intern(fluent_name(&a.predicate, &args), &mut names));
    }

    let g = Grounder {
        objects,
        statics,
        static_facts,
        fluent_index,
    };
    let mut actions = Vec::new();
    for schema in &d.actions {
        g.enumerate(schema, 0, &mut HashMap::new(), &mut actions, cap)?;
    }
    Ok(StripsTask::new(p.name.clone(), names, actions, init, goal)?)
}
