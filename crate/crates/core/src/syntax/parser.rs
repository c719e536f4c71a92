use super::action::Signature;
use super::formula::{ActionRef, Agent, Formula, KEYWORDS};
use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Lt,
    Gt,
    At,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Iff,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::At => "`@`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (tok, width) = if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (Tok::Ident(chars[start..j].iter().collect()), j - start)
        } else {
            let next = chars.get(i + 1).copied();
            match (c, next, chars.get(i + 2).copied()) {
                ('<', Some('-'), Some('>')) => (Tok::Iff, 3),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('(', ..) => (Tok::LParen, 1),
                (')', ..) => (Tok::RParen, 1),
                ('[', ..) => (Tok::LBrack, 1),
                (']', ..) => (Tok::RBrack, 1),
                ('<', ..) => (Tok::Lt, 1),
                ('>', ..) => (Tok::Gt, 1),
                ('@', ..) => (Tok::At, 1),
                ('~', ..) => (Tok::Tilde, 1),
                ('&', ..) => (Tok::Amp, 1),
                ('|', ..) => (Tok::Bar, 1),
                _ => {
                    return Err(SyntaxError::Parse {
                        line: l0,
                        col: c0,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push(Spanned { tok, line: l0, col: c0 });
        i += width;
        col += width;
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'a dyn Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Spanned, message: String) -> SyntaxError {
        SyntaxError::Parse { line: t.line, col: t.col, message }
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        let t = self.bump();
        if t.tok == want {
            Ok(())
        } else {
            Err(self.error_at(&t, format!("expected {}, found {}", want.describe(), t.tok.describe())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Spanned), SyntaxError> {
        let t = self.bump();
        match &t.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok((s.clone(), t)),
            other => Err(self.error_at(&t, format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.imp()?;
        while self.peek().tok == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.peek().tok == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while self.peek().tok == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn action(&mut self, close: Tok) -> Result<ActionRef, SyntaxError> {
        let (name, at) = self.ident("action name")?;
        let Some(states) = self.sig.action_states(&name) else {
            return Err(SyntaxError::UnknownAction { name, line: at.line, col: at.col });
        };
        let mut r = ActionRef::new(name.clone());
        if self.peek().tok == Tok::At {
            self.bump();
            let (point, pt) = self.ident("state label")?;
            if !states.contains(&point) {
                return Err(SyntaxError::UnknownPoint { action: name, point, line: pt.line, col: pt.col });
            }
            r.point = Some(point);
        }
        self.expect(close)?;
        Ok(r)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::LBrack => {
                self.bump();
                let r = self.action(Tok::RBrack)?;
                Ok(Formula::dyn_box(r, self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let r = self.action(Tok::Gt)?;
                Ok(Formula::dyn_dia(r, self.unary()?))
            }
            Tok::Ident(s) if s == "box" || s == "dia" => {
                let is_box = s == "box";
                self.bump();
                let (agent, _) = self.ident("agent")?;
                let body = self.unary()?;
                Ok(if is_box { Formula::boxed(agent, body) } else { Formula::dia(agent, body) })
            }
            Tok::Ident(s) if s == "E" => {
                self.bump();
                let body = self.unary()?;
                let agents: &[Agent] = self.sig.agents();
                if agents.is_empty() {
                    return Err(self.error_at(&t, "`E` needs a nonempty declared agent set".into()));
                }
                Ok(Formula::everyone(agents, &body))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        let t = self.bump();
        match &t.tok {
            Tok::LParen => {
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => Ok(Formula::top()),
            Tok::Ident(s) if s == "false" => Ok(Formula::Bot),
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok(Formula::atom(s.clone())),
            other => Err(self.error_at(&t, format!("expected a formula, found {}", other.describe()))),
        }
    }
}

/// Parses concrete syntax against a signature of declared agents and actions.
pub fn parse_formula(text: &str, sig: &dyn Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, sig };
    let f = p.iff()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(p.error_at(&t, format!("unexpected {}", t.tok.describe())));
    }
    Ok(f)
}
