//! Surface syntax for programs and states over the concrete language.
//!
//! ```text
//! def X0(1, 2) = 1.this -> 2.xx; 2 -> 1[left]; call X0
//! main = if 1 ? compare then { call X0 } else { end }
//! ```
//!
//! Runtime calls are not part of the surface syntax.

use std::collections::BTreeSet;

use corechor::{BExpr, Choreography, Concrete, DefSet, Expr, GlobalState, Label, Program, Var};

use crate::lexer::{Cursor, ParseError, Tok};

type Chor = Choreography<Concrete>;

pub fn parse_program(text: &str) -> Result<Program<Concrete>, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut defs = DefSet::new();
    let mut main = None;
    while !cur.at_eof() {
        let pos = cur.pos();
        match cur.one_of(&["def", "main"])? {
            0 => {
                let name = cur.proc_name()?;
                if defs.is_defined(&name) {
                    return Err(ParseError::new(pos, format!("X{name} is defined twice")));
                }
                cur.sym('(')?;
                let annotation = cur.list(')', Cursor::number)?;
                cur.sym(')')?;
                cur.sym('=')?;
                let body = chor(&mut cur)?;
                defs = defs.define(name, annotation, body);
            }
            _ => {
                if main.is_some() {
                    return Err(ParseError::new(pos, "main is defined twice"));
                }
                cur.sym('=')?;
                main = Some(chor(&mut cur)?);
            }
        }
    }
    let main = main.ok_or_else(|| ParseError::new(cur.pos(), "missing `main = ...`"))?;
    Ok(Program::new(defs, main))
}

/// Parses a lone choreography.
pub fn parse_choreography(text: &str) -> Result<Chor, ParseError> {
    let mut cur = Cursor::new(text)?;
    let c = chor(&mut cur)?;
    cur.finish()?;
    Ok(c)
}

fn chor(cur: &mut Cursor) -> Result<Chor, ParseError> {
    match cur.peek().clone() {
        Tok::Word(w) if w == "end" => {
            cur.keyword("end")?;
            Ok(Chor::end())
        }
        Tok::Word(w) if w == "call" => {
            cur.keyword("call")?;
            Ok(Chor::call(cur.proc_name()?))
        }
        Tok::Word(w) if w == "if" => {
            cur.keyword("if")?;
            let pid = cur.number()?;
            cur.sym('?')?;
            cur.one_of(&["compare"])?;
            cur.keyword("then")?;
            let then_branch = block(cur)?;
            cur.keyword("else")?;
            let else_branch = block(cur)?;
            Ok(Chor::cond(pid, BExpr::Compare, then_branch, else_branch))
        }
        Tok::Num(sender) => {
            cur.number()?;
            let c = if cur.is_sym('.') {
                cur.sym('.')?;
                let expr = [Expr::This, Expr::Zero, Expr::SuccThis]
                    [cur.one_of(&["this", "zero", "succ"])?];
                cur.arrow()?;
                let receiver = cur.number()?;
                cur.sym('.')?;
                let var = [Var::Xx, Var::Yy][cur.one_of(&["xx", "yy"])?];
                cur.sym(';')?;
                Chor::com(sender, expr, receiver, var, chor(cur)?)
            } else {
                cur.arrow()?;
                let receiver = cur.number()?;
                cur.sym('[')?;
                let label = [Label::Left, Label::Right][cur.one_of(&["left", "right"])?];
                cur.sym(']')?;
                cur.sym(';')?;
                Chor::sel(sender, receiver, label, chor(cur)?)
            };
            Ok(c)
        }
        _ => Err(cur.error("a choreography")),
    }
}

fn block(cur: &mut Cursor) -> Result<Chor, ParseError> {
    cur.sym('{')?;
    let c = chor(cur)?;
    cur.sym('}')?;
    Ok(c)
}

/// Parses a state: an optional `default = v` followed by assignments `p.x = v`.
pub fn parse_state(text: &str) -> Result<GlobalState<Concrete>, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut default = 0;
    if cur.is_word("default") {
        cur.keyword("default")?;
        cur.sym('=')?;
        default = cur.number()?;
    }
    let mut s = GlobalState::new(default);
    let mut seen = BTreeSet::new();
    while !cur.at_eof() {
        let pos = cur.pos();
        let p = cur.number()?;
        cur.sym('.')?;
        let x = [Var::Xx, Var::Yy][cur.one_of(&["xx", "yy"])?];
        cur.sym('=')?;
        let v = cur.number()?;
        if !seen.insert((p, x)) {
            return Err(ParseError::new(pos, format!("{p}.{x} is assigned twice")));
        }
        s.set(p, x, v);
    }
    Ok(s)
}

/// Prints a state in the form [`parse_state`] reads.
pub fn print_state(s: &GlobalState<Concrete>) -> String {
    let mut out = format!("default = {}\n", s.default_value());
    for (p, x, v) in s.overrides() {
        out.push_str(&format!("{p}.{x} = {v}\n"));
    }
    out
}

/// Applies `--state k=v` assignments: process `k` gets `xx = v`.
pub fn state_from_assignments(assignments: &[String]) -> Result<GlobalState<Concrete>, String> {
    let mut s = GlobalState::new(0);
    for a in assignments {
        let (k, v) = a
            .split_once('=')
            .ok_or_else(|| format!("`{a}` is not of the form PROCESS=VALUE"))?;
        let k: u64 = k
            .trim()
            .parse()
            .map_err(|_| format!("bad process in `{a}`"))?;
        let v: u64 = v
            .trim()
            .parse()
            .map_err(|_| format!("bad value in `{a}`"))?;
        s.set(k, Var::Xx, v);
    }
    Ok(s)
}
