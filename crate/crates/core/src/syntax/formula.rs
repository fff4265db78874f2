use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Name of a modality, e.g. the `f` in `[f]p` or `[[f]]p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modality(String);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid identifier {0:?}: expected [a-zA-Z][a-zA-Z0-9_]*")]
pub struct InvalidIdentifier(pub String);

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Modality {
    pub fn new(name: impl Into<String>) -> Result<Self, InvalidIdentifier> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Modality(name))
        } else {
            Err(InvalidIdentifier(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A formula of multimodal K extended with the defeasible box (`[[i]]`)
/// and the defeasible diamond (`<<i>>`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Bottom,
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Modality, Box<Formula>),
    Dia(Modality, Box<Formula>),
    DefBox(Modality, Box<Formula>),
    DefDia(Modality, Box<Formula>),
}

/// Shorthand for building a modality in tests and fixtures. Panics on an
/// invalid identifier.
pub fn modality(name: &str) -> Modality {
    Modality::new(name).expect("invalid modality name")
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        assert!(is_identifier(name), "invalid atom name {name:?}");
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(m: &str, f: Formula) -> Formula {
        Formula::Box(modality(m), Box::new(f))
    }

    pub fn dia(m: &str, f: Formula) -> Formula {
        Formula::Dia(modality(m), Box::new(f))
    }

    pub fn def_box(m: &str, f: Formula) -> Formula {
        Formula::DefBox(modality(m), Box::new(f))
    }

    pub fn def_dia(m: &str, f: Formula) -> Formula {
        Formula::DefDia(modality(m), Box::new(f))
    }

    /// Conjunction of all formulas, `true` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Direct children, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Bottom | Formula::Top => vec![],
            Formula::Not(a)
            | Formula::Box(_, a)
            | Formula::Dia(_, a)
            | Formula::DefBox(_, a)
            | Formula::DefDia(_, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => vec![a, b],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Box(_, a)
            | Formula::Dia(_, a)
            | Formula::DefBox(_, a)
            | Formula::DefDia(_, a) => 1 + a.modal_depth(),
            other => other
                .children()
                .into_iter()
                .map(Formula::modal_depth)
                .max()
                .unwrap_or(0),
        }
    }

    /// All subtrees including `self`.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if out.insert(f.clone()) {
                stack.extend(f.children());
            }
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn modalities(&self) -> BTreeSet<Modality> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Box(m, _)
            | Formula::Dia(m, _)
            | Formula::DefBox(m, _)
            | Formula::DefDia(m, _) => {
                out.insert(m.clone());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, on: &mut impl FnMut(&Formula)) {
        on(self);
        for c in self.children() {
            c.visit(on);
        }
    }

    /// Uses only atoms, `false`, negation, conjunction, box and defeasible box.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bottom => true,
            Formula::Not(a) | Formula::Box(_, a) | Formula::DefBox(_, a) => a.is_core(),
            Formula::And(a, b) => a.is_core() && b.is_core(),
            _ => false,
        }
    }

    /// Contains no defeasible operator.
    pub fn is_classical(&self) -> bool {
        match self {
            Formula::DefBox(..) | Formula::DefDia(..) => false,
            other => other.children().into_iter().all(Formula::is_classical),
        }
    }

    /// Rewrites into the core fragment. `true` becomes `~false`, the
    /// diamonds become negated boxes, and the Boolean connectives are
    /// expressed with `~` and `&`.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Bottom => self.clone(),
            Formula::Top => Formula::not(Formula::Bottom),
            Formula::Not(a) => Formula::not(a.desugar()),
            Formula::And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Formula::Or(a, b) => Formula::not(Formula::and(
                Formula::not(a.desugar()),
                Formula::not(b.desugar()),
            )),
            Formula::Implies(a, b) => desugared_implication(a.desugar(), b.desugar()),
            Formula::Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::and(
                    desugared_implication(a.clone(), b.clone()),
                    desugared_implication(b, a),
                )
            }
            Formula::Box(m, a) => Formula::Box(m.clone(), Box::new(a.desugar())),
            Formula::DefBox(m, a) => Formula::DefBox(m.clone(), Box::new(a.desugar())),
            Formula::Dia(m, a) => {
                Formula::not(Formula::Box(m.clone(), Box::new(Formula::not(a.desugar()))))
            }
            Formula::DefDia(m, a) => Formula::not(Formula::DefBox(
                m.clone(),
                Box::new(Formula::not(a.desugar())),
            )),
        }
    }
}

fn desugared_implication(a: Formula, b: Formula) -> Formula {
    Formula::not(Formula::and(a, Formula::not(b)))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render::render_formula(self))
    }
}

/// Either a plain formula or a KLM-style conditional `a |~ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Plain(Formula),
    Conditional(Conditional),
}

/// `antecedent |~ consequent`: every most preferred antecedent-world is a
/// consequent-world.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conditional {
    pub antecedent: Formula,
    pub consequent: Formula,
}

impl Conditional {
    pub fn new(antecedent: Formula, consequent: Formula) -> Self {
        Conditional {
            antecedent,
            consequent,
        }
    }
}

impl fmt::Display for Conditional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |~ {}", self.antecedent, self.consequent)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Plain(p) => p.fmt(f),
            Statement::Conditional(c) => c.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn desugar_examples() {
        assert_eq!(Formula::Top.desugar(), Formula::not(Formula::Bottom));
        assert_eq!(
            Formula::def_dia("m", Formula::Top).desugar(),
            Formula::not(Formula::def_box(
                "m",
                Formula::not(Formula::not(Formula::Bottom))
            ))
        );
        assert_eq!(
            Formula::dia("f", Formula::not(Formula::atom("h"))).desugar(),
            Formula::not(Formula::boxed(
                "f",
                Formula::not(Formula::not(Formula::atom("h")))
            ))
        );
    }

    #[test]
    fn desugared_output_is_core() {
        let f = Formula::iff(
            Formula::or(p(), Formula::Top),
            Formula::def_dia("a", Formula::implies(p(), Formula::dia("b", q()))),
        );
        assert!(!f.is_core());
        assert!(f.desugar().is_core());
    }

    #[test]
    fn subformula_examples() {
        assert_eq!(p().subformulas(), BTreeSet::from([p()]));
        assert_eq!(
            Formula::and(p(), q()).subformulas(),
            BTreeSet::from([p(), q(), Formula::and(p(), q())])
        );
        let f = Formula::def_box("a", Formula::not(p()));
        assert_eq!(
            f.subformulas(),
            BTreeSet::from([p(), Formula::not(p()), f.clone()])
        );
    }

    #[test]
    fn modal_depth_examples() {
        assert_eq!(Formula::and(p(), Formula::not(q())).modal_depth(), 0);
        assert_eq!(
            Formula::boxed("a", Formula::def_box("b", p())).modal_depth(),
            2
        );
        assert_eq!(
            Formula::implies(Formula::def_box("f", p()), Formula::boxed("f", q())).modal_depth(),
            1
        );
    }

    #[test]
    fn classical_fragment() {
        assert!(Formula::boxed("a", Formula::dia("b", p())).is_classical());
        assert!(!Formula::and(p(), Formula::def_dia("a", p())).is_classical());
    }

    #[test]
    fn identifiers() {
        assert!(Modality::new("f_2").is_ok());
        assert!(Modality::new("2f").is_err());
        assert!(Modality::new("").is_err());
    }
}
