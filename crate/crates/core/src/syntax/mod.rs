//! Formulas, action structures, the concrete grammar, and the printer.

mod action;
mod formula;
mod parser;
mod print;

use thiserror::Error;

pub use action::{shift_action, ActionStructure, DeclTable, Env, Signature};
pub use formula::{is_valid_label, ActionRef, Agent, Formula, KEYWORDS};
pub use parser::parse_formula;
pub use print::print_formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at {line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("unknown action `{name}` at {line}:{col}")]
    UnknownAction { name: String, line: usize, col: usize },
    #[error("action `{action}` has no state `{point}` (at {line}:{col})")]
    UnknownPoint { action: String, point: String, line: usize, col: usize },
    #[error("action `{action}` has no state `{state}`")]
    UnknownState { action: String, state: String },
    #[error("unresolved action `{0}`")]
    UnresolvedAction(String),
    #[error("action `{0}` declared twice")]
    DuplicateAction(String),
    #[error("actions reference each other cyclically: {}", .0.join(", "))]
    Cycle(Vec<String>),
    #[error("invalid action `{action}`: {reason}")]
    InvalidAction { action: String, reason: String },
}

/// `true` iff `f` contains no dynamic modality.
pub fn is_static(f: &Formula) -> bool {
    f.is_static()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn p(s: &str) -> Formula {
        Formula::atom(s)
    }

    fn env_ab() -> Env {
        let alpha = ActionStructure::from_labels(
            "alpha",
            &["k", "l"],
            "k",
            &[("a", &[("k", "k"), ("l", "l")]), ("b", &[("k", "k"), ("l", "l")])],
            &[("k", p("Ga")), ("l", p("Wa"))],
        )
        .unwrap();
        Env::with_actions(vec!["a".into(), "b".into()], [alpha]).unwrap()
    }

    #[test]
    fn dynamic_diamond_uses_designated_point() {
        let f = parse_formula("<alpha> p", &env_ab()).unwrap();
        assert_eq!(f, Formula::dyn_dia(ActionRef::new("alpha"), p("p")));
    }

    #[test]
    fn macros_expand() {
        let env = env_ab();
        assert_eq!(parse_formula("~p", &env).unwrap(), Formula::imp(p("p"), Formula::Bot));
        assert_eq!(parse_formula("true", &env).unwrap(), Formula::imp(Formula::Bot, Formula::Bot));
        assert_eq!(
            parse_formula("p <-> q", &env).unwrap(),
            Formula::and(Formula::imp(p("p"), p("q")), Formula::imp(p("q"), p("p")))
        );
        let bap = Formula::boxed("a", p("p"));
        assert_eq!(
            parse_formula("E (box a p)", &env).unwrap(),
            Formula::and(Formula::boxed("a", bap.clone()), Formula::boxed("b", bap))
        );
    }

    #[test]
    fn printer_cases() {
        assert_eq!(print_formula(&Formula::imp(p("p"), Formula::Bot)), "p -> false");
        assert_eq!(print_formula(&Formula::and(p("p"), Formula::or(p("q"), p("r")))), "p & (q | r)");
        let f = Formula::dyn_box(ActionRef::new("beta"), Formula::boxed("c", p("Ga")));
        assert_eq!(print_formula(&f), "[beta] box c Ga");
        assert_eq!(print_formula(&Formula::top()), "true");
    }

    #[test]
    fn associativity() {
        let env = env_ab();
        assert_eq!(
            parse_formula("p -> q -> r", &env).unwrap(),
            Formula::imp(p("p"), Formula::imp(p("q"), p("r")))
        );
        assert_eq!(
            parse_formula("p & q & r", &env).unwrap(),
            Formula::and(Formula::and(p("p"), p("q")), p("r"))
        );
        assert_eq!(
            parse_formula("p | q & r", &env).unwrap(),
            Formula::or(p("p"), Formula::and(p("q"), p("r")))
        );
        let f = Formula::imp(Formula::imp(p("p"), p("q")), p("r"));
        assert_eq!(print_formula(&f), "(p -> q) -> r");
        let g = Formula::and(p("p"), Formula::and(p("q"), p("r")));
        assert_eq!(print_formula(&g), "p & (q & r)");
    }

    #[test]
    fn errors_have_positions() {
        let env = env_ab();
        match parse_formula("p &\n  & q", &env) {
            Err(SyntaxError::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_formula("<gamma> p", &env), Err(SyntaxError::UnknownAction { .. })));
        assert!(matches!(parse_formula("[alpha@z] p", &env), Err(SyntaxError::UnknownPoint { .. })));
        assert!(matches!(parse_formula("p $ q", &env), Err(SyntaxError::Parse { line: 1, col: 3, .. })));
        assert!(parse_formula("E p", &Env::new(vec![])).is_err());
    }

    #[test]
    fn shifted_reference() {
        let env = env_ab();
        let f = parse_formula("[alpha@l] box a p", &env).unwrap();
        assert_eq!(f, Formula::dyn_box(ActionRef::at("alpha", "l"), Formula::boxed("a", p("p"))));
        assert_eq!(print_formula(&f), "[alpha@l] box a p");
    }

    #[test]
    fn shifting() {
        let env = env_ab();
        let alpha = env.action("alpha").unwrap();
        assert_eq!(&shift_action(alpha, "k").unwrap(), alpha);
        let l = shift_action(alpha, "l").unwrap();
        assert_eq!(l.designated_label(), "l");
        assert_eq!(l.pre(l.designated()), &p("Wa"));
        assert_eq!(&shift_action(&l, "k").unwrap(), alpha);
        assert!(shift_action(alpha, "m").is_err());
    }

    #[test]
    fn static_check() {
        assert!(is_static(&Formula::boxed("a", p("p"))));
        assert!(!is_static(&Formula::dyn_dia(ActionRef::new("alpha"), p("p"))));
        assert!(!is_static(&Formula::imp(p("p"), Formula::dyn_box(ActionRef::new("alpha"), Formula::Bot))));
    }

    #[test]
    fn cycles_rejected() {
        let x = ActionStructure::new(
            "x",
            vec!["s".into()],
            0,
            BTreeMap::new(),
            vec![Formula::dyn_dia(ActionRef::new("y"), p("p"))],
        )
        .unwrap();
        let y = ActionStructure::new(
            "y",
            vec!["s".into()],
            0,
            BTreeMap::new(),
            vec![Formula::dyn_dia(ActionRef::new("x"), p("p"))],
        )
        .unwrap();
        assert!(matches!(Env::with_actions(vec![], [x, y]), Err(SyntaxError::Cycle(_))));
    }

    #[test]
    fn replace_at_path() {
        let f = Formula::and(p("p"), Formula::boxed("a", p("q")));
        let g = f.replace_at(&[1, 0], p("r")).unwrap();
        assert_eq!(g, Formula::and(p("p"), Formula::boxed("a", p("r"))));
        assert_eq!(g.at_path(&[1, 0]), Some(&p("r")));
        assert!(f.replace_at(&[0, 0], p("r")).is_none());
    }
}
