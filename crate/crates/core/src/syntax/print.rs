use std::fmt;

use super::formula::Formula;

const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;
const ATOM: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        _ if f.is_top() => ATOM,
        Formula::Atom(_) | Formula::Bot => ATOM,
        Formula::Imp(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Box(..) | Formula::Dia(..) | Formula::DynDia(..) | Formula::DynBox(..) => UNARY,
    }
}

fn write(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = level(f) < min;
    if paren {
        out.write_str("(")?;
    }
    match f {
        _ if f.is_top() => out.write_str("true")?,
        Formula::Atom(p) => out.write_str(p)?,
        Formula::Bot => out.write_str("false")?,
        Formula::And(a, b) => {
            write(a, AND, out)?;
            out.write_str(" & ")?;
            write(b, UNARY, out)?;
        }
        Formula::Or(a, b) => {
            write(a, OR, out)?;
            out.write_str(" | ")?;
            write(b, AND, out)?;
        }
        Formula::Imp(a, b) => {
            write(a, OR, out)?;
            out.write_str(" -> ")?;
            write(b, IMP, out)?;
        }
        Formula::Box(i, a) => {
            write!(out, "box {i} ")?;
            write(a, UNARY, out)?;
        }
        Formula::Dia(i, a) => {
            write!(out, "dia {i} ")?;
            write(a, UNARY, out)?;
        }
        Formula::DynBox(r, a) => {
            write!(out, "[{r}] ")?;
            write(a, UNARY, out)?;
        }
        Formula::DynDia(r, a) => {
            write!(out, "<{r}> ")?;
            write(a, UNARY, out)?;
        }
    }
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(self, IMP, f)
    }
}

/// Concrete syntax with minimal parentheses.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}
