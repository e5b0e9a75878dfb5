//! Reader for the `:strips` fragment of PDDL and grounding into
//! [`StripsTask`](crate::model::StripsTask).
//!
//! Identifiers are case-insensitive and normalised to lower case. Supported
//! constructs: `:requirements :strips`, `:constants`, `:predicates`, and
//! actions with conjunctive positive preconditions and add/delete effects.

mod ast;
mod ground;
mod sexpr;

use std::collections::HashSet;
use std::fmt;

pub use ast::{ActionSchema, Atom, DomainAst, PredicateDecl, ProblemAst};
pub use ground::{ground, ground_with_cap, GroundError, DEFAULT_GROUNDING_CAP};
use sexpr::{read_one, Pos, Sexpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

type Result<T> = std::result::Result<T, ParseError>;

/// Parses a domain and a problem for it.
pub fn parse(domain_text: &str, problem_text: &str) -> Result<(DomainAst, ProblemAst)> {
    let d = parse_domain(domain_text)?;
    let p = parse_problem(problem_text, &d)?;
    Ok((d, p))
}

fn list_of(e: &Sexpr, what: &str) -> Result<Vec<Sexpr>> {
    e.as_list()
        .map(<[Sexpr]>::to_vec)
        .ok_or_else(|| ParseError::at(e.pos(), format!("expected a list for {what}")))
}

fn atom_of<'a>(e: &'a Sexpr, what: &str) -> Result<&'a str> {
    e.as_atom()
        .ok_or_else(|| ParseError::at(e.pos(), format!("expected {what}")))
}

fn name_of(e: &Sexpr, what: &str) -> Result<String> {
    let s = atom_of(e, what)?;
    if s.starts_with('?') || s.starts_with(':') {
        return Err(ParseError::at(e.pos(), format!("expected {what}, found `{s}`")));
    }
    Ok(s.to_string())
}

/// `(define (KIND NAME) SECTIONS...)`
fn header<'a>(top: &'a Sexpr, kind: &str) -> Result<(String, &'a [Sexpr])> {
    let items = top
        .as_list()
        .ok_or_else(|| ParseError::at(top.pos(), "expected `(define ...)`"))?;
    match items.first().and_then(Sexpr::as_atom) {
        Some("define") => {}
        _ => return Err(ParseError::at(top.pos(), "expected `(define ...)`")),
    }
    let head = items
        .get(1)
        .ok_or_else(|| ParseError::at(top.pos(), format!("missing `({kind} NAME)`")))?;
    let hl = list_of(head, kind)?;
    if hl.len() != 2 || hl[0].as_atom() != Some(kind) {
        return Err(ParseError::at(head.pos(), format!("expected `({kind} NAME)`")));
    }
    Ok((name_of(&hl[1], &format!("{kind} name"))?, &items[2..]))
}

fn section_key(e: &Sexpr) -> Result<(&str, &[Sexpr])> {
    let items = e
        .as_list()
        .ok_or_else(|| ParseError::at(e.pos(), "expected a `(:section ...)` list"))?;
    let key = items
        .first()
        .and_then(Sexpr::as_atom)
        .filter(|k| k.starts_with(':'))
        .ok_or_else(|| ParseError::at(e.pos(), "expected a section keyword"))?;
    Ok((key, &items[1..]))
}

fn untyped_names(items: &[Sexpr], what: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for it in items {
        let s = atom_of(it, what)?;
        if s == "-" {
            return Err(ParseError::at(it.pos(), "typed lists are not supported (`:typing` is outside the strips fragment)"));
        }
        let s = if what == "parameter" {
            if !s.starts_with('?') {
                return Err(ParseError::at(it.pos(), format!("parameter `{s}` must start with `?`")));
            }
            s.to_string()
        } else {
            name_of(it, what)?
        };
        if !seen.insert(s.clone()) {
            return Err(ParseError::at(it.pos(), format!("duplicate {what} `{s}`")));
        }
        out.push(s);
    }
    Ok(out)
}

struct Scope<'a> {
    predicates: &'a [PredicateDecl],
    /// Symbols allowed as arguments (parameters and constants, or objects).
    symbols: HashSet<&'a str>,
}

impl Scope<'_> {
    fn atom(&self, e: &Sexpr) -> Result<Atom> {
        let items = list_of(e, "atom")?;
        let head = items
            .first()
            .ok_or_else(|| ParseError::at(e.pos(), "empty atom `()`"))?;
        let pred = atom_of(head, "predicate name")?;
        if pred == "not" {
            return Err(ParseError::at(e.pos(), "negative literals are not supported here"));
        }
        if pred == "and" || pred == "or" || pred == "=" || pred == "forall" || pred == "exists" || pred == "when" {
            return Err(ParseError::at(e.pos(), format!("`{pred}` is not supported here")));
        }
        let decl = self
            .predicates
            .iter()
            .find(|p| p.name == pred)
            .ok_or_else(|| ParseError::at(head.pos(), format!("undeclared predicate `{pred}`")))?;
        let args = &items[1..];
        if args.len() != decl.arity() {
            return Err(ParseError::at(
                e.pos(),
                format!("predicate `{pred}` expects {} arguments, found {}", decl.arity(), args.len()),
            ));
        }
        let mut out = Vec::with_capacity(args.len());
        for a in args {
            let s = atom_of(a, "argument")?;
            if !self.symbols.contains(s) {
                let kind = if s.starts_with('?') { "parameter" } else { "object" };
                return Err(ParseError::at(a.pos(), format!("undeclared {kind} `{s}` in `{pred}`")));
            }
            out.push(s.to_string());
        }
        Ok(Atom {
            predicate: pred.to_string(),
            args: out,
        })
    }

    /// `(and A ...)`, a single atom or `()`. Returns positive and negated atoms.
    fn conjunction(&self, e: &Sexpr, allow_negation: bool) -> Result<(Vec<Atom>, Vec<Atom>)> {
        let items = list_of(e, "condition")?;
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let parts: &[Sexpr] = match items.first().and_then(Sexpr::as_atom) {
            None if items.is_empty() => &[],
            Some("and") => &items[1..],
            _ => std::slice::from_ref(e),
        };
        for part in parts {
            let inner = list_of(part, "literal")?;
            if inner.first().and_then(Sexpr::as_atom) == Some("not") {
                if !allow_negation {
                    return Err(ParseError::at(part.pos(), "negative preconditions are not supported"));
                }
                if inner.len() != 2 {
                    return Err(ParseError::at(part.pos(), "`not` takes exactly one atom"));
                }
                neg.push(self.atom(&inner[1])?);
            } else {
                pos.push(self.atom(part)?);
            }
        }
        Ok((pos, neg))
    }
}

pub fn parse_domain(text: &str) -> Result<DomainAst> {
    let top = read_one(text)?;
    let (name, sections) = header(&top, "domain")?;
    let mut requirements = Vec::new();
    let mut constants = Vec::new();
    let mut predicates: Vec<PredicateDecl> = Vec::new();
    let mut action_exprs = Vec::new();
    for s in sections {
        let (key, rest) = section_key(s)?;
        match key {
            ":requirements" => {
                for r in rest {
                    let req = atom_of(r, "requirement")?;
                    if req != ":strips" {
                        return Err(ParseError::at(r.pos(), format!("unsupported requirement `{req}`")));
                    }
                    requirements.push(req.to_string());
                }
            }
            ":constants" => constants.extend(untyped_names(rest, "constant")?),
            ":predicates" => {
                for p in rest {
                    let items = list_of(p, "predicate declaration")?;
                    let head = items
                        .first()
                        .ok_or_else(|| ParseError::at(p.pos(), "empty predicate declaration"))?;
                    let pname = name_of(head, "predicate name")?;
                    if predicates.iter().any(|d| d.name == pname) {
                        return Err(ParseError::at(head.pos(), format!("duplicate predicate `{pname}`")));
                    }
                    predicates.push(PredicateDecl {
                        name: pname,
                        params: untyped_names(&items[1..], "parameter")?,
                    });
                }
            }
            ":action" => action_exprs.push(s),
            other => return Err(ParseError::at(s.pos(), format!("unsupported domain section `{other}`"))),
        }
    }
    let mut actions: Vec<ActionSchema> = Vec::new();
    for s in action_exprs {
        let a = parse_action(s, &predicates, &constants)?;
        if actions.iter().any(|b| b.name == a.name) {
            return Err(ParseError::at(s.pos(), format!("duplicate action `{}`", a.name)));
        }
        actions.push(a);
    }
    Ok(DomainAst {
        name,
        requirements,
        constants,
        predicates,
        actions,
    })
}

fn parse_action(e: &Sexpr, predicates: &[PredicateDecl], constants: &[String]) -> Result<ActionSchema> {
    let items = e.as_list().expect("section is a list");
    let name = name_of(
        items
            .get(1)
            .ok_or_else(|| ParseError::at(e.pos(), "action without a name"))?,
        "action name",
    )?;
    let mut parameters = Vec::new();
    let mut pre = None;
    let mut eff = None;
    let mut i = 2;
    while i < items.len() {
        let key = atom_of(&items[i], "action keyword")?;
        let val = items
            .get(i + 1)
            .ok_or_else(|| ParseError::at(items[i].pos(), format!("missing value for `{key}`")))?;
        match key {
            ":parameters" => parameters = untyped_names(&list_of(val, "parameter list")?, "parameter")?,
            ":precondition" => pre = Some(val),
            ":effect" => eff = Some(val),
            other => return Err(ParseError::at(items[i].pos(), format!("unsupported action keyword `{other}`"))),
        }
        i += 2;
    }
    let scope = Scope {
        predicates,
        symbols: parameters
            .iter()
            .chain(constants)
            .map(String::as_str)
            .collect(),
    };
    let precondition = match pre {
        Some(p) => scope.conjunction(p, false)?.0,
        None => Vec::new(),
    };
    let (add, delete) = match eff {
        Some(ef) => scope.conjunction(ef, true)?,
        None => (Vec::new(), Vec::new()),
    };
    Ok(ActionSchema {
        name,
        parameters,
        precondition,
        add,
        delete,
    })
}

pub fn parse_problem(text: &str, domain: &DomainAst) -> Result<ProblemAst> {
    let top = read_one(text)?;
    let (name, sections) = header(&top, "problem")?;
    let mut dname = None;
    let mut objects = Vec::new();
    let mut init_exprs: &[Sexpr] = &[];
    let mut goal_expr = None;
    for s in sections {
        let (key, rest) = section_key(s)?;
        match key {
            ":domain" => {
                let d = rest
                    .first()
                    .ok_or_else(|| ParseError::at(s.pos(), "missing domain name"))?;
                let dn = name_of(d, "domain name")?;
                if dn != domain.name {
                    return Err(ParseError::at(
                        d.pos(),
                        format!("problem is for domain `{dn}`, not `{}`", domain.name),
                    ));
                }
                dname = Some(dn);
            }
            ":objects" => objects.extend(untyped_names(rest, "object")?),
            ":init" => init_exprs = rest,
            ":goal" => {
                if rest.len() != 1 {
                    return Err(ParseError::at(s.pos(), "`:goal` takes exactly one condition"));
                }
                goal_expr = Some(&rest[0]);
            }
            other => return Err(ParseError::at(s.pos(), format!("unsupported problem section `{other}`"))),
        }
    }
    let domain_name = dname.ok_or_else(|| ParseError::at(top.pos(), "missing `(:domain NAME)`"))?;
    for o in &objects {
        if domain.constants.contains(o) {
            return Err(ParseError::at(top.pos(), format!("object `{o}` redeclares a domain constant")));
        }
    }
    let scope = Scope {
        predicates: &domain.predicates,
        symbols: objects
            .iter()
            .chain(&domain.constants)
            .map(String::as_str)
            .collect(),
    };
    let init = init_exprs
        .iter()
        .map(|e| scope.atom(e))
        .collect::<Result<Vec<_>>>()?;
    let goal_expr = goal_expr.ok_or_else(|| ParseError::at(top.pos(), "missing `(:goal ...)`"))?;
    let goal = scope.conjunction(goal_expr, false)?.0;
    Ok(ProblemAst {
        name,
        domain: domain_name,
        objects,
        init,
        goal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BW: &str = include_str!("../../../../corpus/blocksworld/domain.pddl");
    const BW_P1: &str = include_str!("../../../../corpus/blocksworld/p01.pddl");

    #[test]
    fn blocksworld_domain_shape() {
        let d = parse_domain(BW).unwrap();
        assert_eq!(d.predicates.len(), 5);
        let mut names: Vec<_> = d.actions.iter().map(|a| a.name.as_str()).collect();
        names.sort();
        assert_eq!(names, ["pick-up", "put-down", "stack", "unstack"]);
        let stack = d.actions.iter().find(|a| a.name == "stack").unwrap();
        assert_eq!(stack.delete.len(), 2);
    }

    #[test]
    fn empty_domain_errors_at_line_one() {
        let e = parse_domain("").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn undeclared_goal_predicate() {
        let d = parse_domain(BW).unwrap();
        let bad = BW_P1.replace("(:goal (and", "(:goal (and (levitating a)");
        let e = parse_problem(&bad, &d).unwrap_err();
        assert!(e.message.contains("levitating"), "{e}");
    }

    #[test]
    fn rejects_out_of_fragment_input() {
        let neg = BW.replace(":precondition (and (clear ?x)", ":precondition (and (not (clear ?x))");
        assert!(parse_domain(&neg).unwrap_err().message.contains("negative precondition"));
        let typed = BW.replace("(:requirements :strips)", "(:requirements :strips :typing)");
        assert!(parse_domain(&typed).unwrap_err().message.contains(":typing"));
        let arity = BW.replace("(holding ?x))", "(holding ?x ?x))");
        assert!(parse_domain(&arity).is_err());
        let undeclared = BW.replace(":precondition (and (clear ?x)", ":precondition (and (clear ?z)");
        assert!(parse_domain(&undeclared).unwrap_err().message.contains("?z"));
    }

    #[test]
    fn error_positions_point_at_offender() {
        let text = "(define (domain d)\n  (:predicates (p ?x))\n  (:action a :parameters (?x)\n     :precondition (q ?x)))";
        let e = parse_domain(text).unwrap_err();
        assert_eq!((e.line, e.column), (4, 21));
    }

    #[test]
    fn domain_mismatch_rejected() {
        let d = parse_domain(BW).unwrap();
        let other = BW_P1.replace("(:domain blocksworld)", "(:domain gripper)");
        assert!(parse_problem(&other, &d).is_err());
    }

    #[test]
    fn round_trip_corpus_file() {
        let (d, p) = parse(BW, BW_P1).unwrap();
        let d2 = parse_domain(&d.to_string()).unwrap();
        assert_eq!(d, d2);
        assert_eq!(p, parse_problem(&p.to_string(), &d2).unwrap());
    }
}
