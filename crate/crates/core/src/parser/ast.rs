use std::fmt;

/// Predicate applied to arguments. In action schemas an argument starting
/// with `?` is a parameter, anything else is a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Atom {
            predicate: predicate.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub params: Vec<String>,
}

impl PredicateDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub parameters: Vec<String>,
    pub precondition: Vec<Atom>,
    pub add: Vec<Atom>,
    pub delete: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainAst {
    pub name: String,
    pub requirements: Vec<String>,
    pub constants: Vec<String>,
    pub predicates: Vec<PredicateDecl>,
    pub actions: Vec<ActionSchema>,
}

impl DomainAst {
    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemAst {
    pub name: String,
    pub domain: String,
    pub objects: Vec<String>,
    pub init: Vec<Atom>,
    pub goal: Vec<Atom>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

fn conj(f: &mut fmt::Formatter<'_>, atoms: &[Atom], negated: &[Atom]) -> fmt::Result {
    write!(f, "(and")?;
    for a in atoms {
        write!(f, " {a}")?;
    }
    for a in negated {
        write!(f, " (not {a})")?;
    }
    write!(f, ")")
}

impl fmt::Display for DomainAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (domain {})", self.name)?;
        if !self.requirements.is_empty() {
            writeln!(f, "  (:requirements {})", self.requirements.join(" "))?;
        }
        if !self.constants.is_empty() {
            writeln!(f, "  (:constants {})", self.constants.join(" "))?;
        }
        write!(f, "  (:predicates")?;
        for p in &self.predicates {
            write!(f, " {}", Atom::new(p.name.clone(), p.params.clone()))?;
        }
        writeln!(f, ")")?;
        for a in &self.actions {
            writeln!(f, "  (:action {}", a.name)?;
            writeln!(f, "    :parameters ({})", a.parameters.join(" "))?;
            write!(f, "    :precondition ")?;
            conj(f, &a.precondition, &[])?;
            write!(f, "\n    :effect ")?;
            conj(f, &a.add, &a.delete)?;
            writeln!(f, ")")?;
        }
        writeln!(f, ")")
    }
}

impl fmt::Display for ProblemAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (problem {})", self.name)?;
        writeln!(f, "  (:domain {})", self.domain)?;
        writeln!(f, "  (:objects {})", self.objects.join(" "))?;
        write!(f, "  (:init")?;
        for a in &self.init {
            write!(f, " {a}")?;
        }
        write!(f, ")\n  (:goal ")?;
        conj(f, &self.goal, &[])?;
        writeln!(f, "))")
    }
}
