//! Surface syntax for partial recursive functions.
//!
//! `Z`, `S`, `P[k/m]` (1-based), `C(g; f1, ..., fm)`, `C(g; /k)` for a
//! composition with no inner functions, `R(g, h)` and `M(h)`.

use corechor::PRFunction;

use crate::lexer::{Cursor, ParseError, Pos};

pub fn parse_prf(text: &str) -> Result<PRFunction, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = function(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

fn function(cur: &mut Cursor) -> Result<PRFunction, ParseError> {
    let pos = cur.pos();
    match cur.one_of(&["Z", "S", "P", "C", "R", "M"])? {
        0 => Ok(PRFunction::zero()),
        1 => Ok(PRFunction::successor()),
        2 => {
            cur.sym('[')?;
            let kpos = cur.pos();
            let k = cur.number()?;
            cur.sym('/')?;
            let m = cur.number()?;
            cur.sym(']')?;
            if k == 0 {
                return Err(ParseError::new(kpos, "projection indices start at 1"));
            }
            built(pos, PRFunction::projection(k as usize - 1, m as usize))
        }
        3 => {
            cur.sym('(')?;
            let outer = function(cur)?;
            cur.sym(';')?;
            let f = if cur.is_sym('/') {
                cur.sym('/')?;
                let arity = cur.number()?;
                PRFunction::composition(outer, vec![], arity as usize)
            } else {
                let inner = cur.list(')', function)?;
                if inner.is_empty() {
                    return Err(cur.error("an inner function or `/arity`"));
                }
                PRFunction::compose(outer, inner)
            };
            cur.sym(')')?;
            built(pos, f)
        }
        4 => {
            cur.sym('(')?;
            let base = function(cur)?;
            cur.sym(',')?;
            let step = function(cur)?;
            cur.sym(')')?;
            built(pos, PRFunction::recursion(base, step))
        }
        _ => {
            cur.sym('(')?;
            let h = function(cur)?;
            cur.sym(')')?;
            built(pos, PRFunction::minimization(h))
        }
    }
}

/// Reports arity errors at the start of the offending term.
fn built(pos: Pos, f: Result<PRFunction, corechor::PrfError>) -> Result<PRFunction, ParseError> {
    f.map_err(|e| ParseError::new(pos, e.to_string()))
}
