//! Syntax-directed type checking for terms-in-context, plus typed position
//! queries used by the rewrite engine.

use crate::term::{
    splice_at, subterm_at, Context, InvalidPosition, Position, Signature, Term, Type,
};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("unbound identifier `{0}`")]
    UnboundIdentifier(String),
    #[error("unbound de Bruijn index {0}")]
    UnboundIndex(usize),
    #[error("duplicate context variable `{0}`")]
    DuplicateContextVariable(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
}

/// Returns the unique type of a well-typed term, or the first failure.
pub fn typecheck(sig: &Signature, ctx: &Context, term: &Term) -> Result<Type, TypeError> {
    let mut binders = Vec::new();
    infer(sig, ctx, &mut binders, term)
}

/// Type checking with an explicit stack of binder types (innermost last),
/// for terms with loose indices referring to enclosing binders.
pub fn typecheck_open(
    sig: &Signature,
    ctx: &Context,
    binders: &[Type],
    term: &Term,
) -> Result<Type, TypeError> {
    let mut stack = binders.to_vec();
    infer(sig, ctx, &mut stack, term)
}

fn infer(
    sig: &Signature,
    ctx: &Context,
    binders: &mut Vec<Type>,
    term: &Term,
) -> Result<Type, TypeError> {
    match term {
        Term::Var(x) => ctx
            .type_of(x)
            .cloned()
            .or_else(|| sig.type_of(x).cloned())
            .ok_or_else(|| TypeError::UnboundIdentifier(x.clone())),
        Term::Const(c) => sig
            .type_of(c)
            .cloned()
            .ok_or_else(|| TypeError::UnboundIdentifier(c.clone())),
        Term::Bound(i) => {
            if *i < binders.len() {
                Ok(binders[binders.len() - 1 - i].clone())
            } else {
                Err(TypeError::UnboundIndex(*i))
            }
        }
        Term::Unit => Ok(Type::Unit),
        Term::Abs(ty, body) => {
            binders.push(ty.clone());
            let cod = infer(sig, ctx, binders, body)?;
            binders.pop();
            Ok(Type::arrow(ty.clone(), cod))
        }
        Term::App(f, a) => {
            let tf = infer(sig, ctx, binders, f)?;
            let ta = infer(sig, ctx, binders, a)?;
            match tf {
                Type::Arrow(dom, cod) => {
                    if *dom == ta {
                        Ok(*cod)
                    } else {
                        Err(TypeError::TypeMismatch(format!(
                            "applied function expects `{dom}` but argument has type `{ta}`"
                        )))
                    }
                }
                other => Err(TypeError::TypeMismatch(format!(
                    "application of non-function of type `{other}`"
                ))),
            }
        }
        Term::Pair(a, b) => {
            let ta = infer(sig, ctx, binders, a)?;
            let tb = infer(sig, ctx, binders, b)?;
            Ok(Type::prod(ta, tb))
        }
        Term::Proj(p, a) => {
            let ta = infer(sig, ctx, binders, a)?;
            match ta {
                Type::Prod(t1, t2) => Ok(match p {
                    crate::term::Proj::Fst => *t1,
                    crate::term::Proj::Snd => *t2,
                }),
                other => Err(TypeError::TypeMismatch(format!(
                    "projection from non-product of type `{other}`"
                ))),
            }
        }
    }
}

/// A subterm position together with its type and the binder types above it
/// (outermost first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedPosition {
    pub pos: Position,
    pub ty: Type,
    pub binders: Vec<Type>,
}

/// All positions of a well-typed term in preorder, each with its type and
/// enclosing binder types.
pub fn typed_positions(
    sig: &Signature,
    ctx: &Context,
    term: &Term,
) -> Result<Vec<TypedPosition>, TypeError> {
    fn go(
        sig: &Signature,
        ctx: &Context,
        t: &Term,
        here: Position,
        binders: &mut Vec<Type>,
        out: &mut Vec<TypedPosition>,
    ) -> Result<Type, TypeError> {
        let slot = out.len();
        out.push(TypedPosition {
            pos: here.clone(),
            ty: Type::Unit, // placeholder, patched below
            binders: binders.clone(),
        });
        let ty = match t {
            Term::App(f, a) => {
                let tf = go(sig, ctx, f, here.child(1), binders, out)?;
                let ta = go(sig, ctx, a, here.child(2), binders, out)?;
                match tf {
                    Type::Arrow(dom, cod) if *dom == ta => *cod,
                    Type::Arrow(dom, _) => {
                        return Err(TypeError::TypeMismatch(format!(
                            "applied function expects `{dom}` but argument has type `{ta}`"
                        )))
                    }
                    other => {
                        return Err(TypeError::TypeMismatch(format!(
                            "application of non-function of type `{other}`"
                        )))
                    }
                }
            }
            Term::Pair(a, b) => {
                let ta = go(sig, ctx, a, here.child(1), binders, out)?;
                let tb = go(sig, ctx, b, here.child(2), binders, out)?;
                Type::prod(ta, tb)
            }
            Term::Abs(ty, b) => {
                binders.push(ty.clone());
                let cod = go(sig, ctx, b, here.child(1), binders, out)?;
                binders.pop();
                Type::arrow(ty.clone(), cod)
            }
            Term::Proj(p, a) => {
                let ta = go(sig, ctx, a, here.child(1), binders, out)?;
                match ta {
                    Type::Prod(t1, t2) => match p {
                        crate::term::Proj::Fst => *t1,
                        crate::term::Proj::Snd => *t2,
                    },
                    other => {
                        return Err(TypeError::TypeMismatch(format!(
                            "projection from non-product of type `{other}`"
                        )))
                    }
                }
            }
            leaf => {
                let mut stack = binders.clone();
                infer(sig, ctx, &mut stack, leaf)?
            }
        };
        out[slot].ty = ty.clone();
        Ok(ty)
    }
    let mut out = Vec::new();
    let mut binders = Vec::new();
    go(sig, ctx, term, Position::root(), &mut binders, &mut out)?;
    Ok(out)
}

/// Type and binder stack at a single position.
pub fn type_at(
    sig: &Signature,
    ctx: &Context,
    term: &Term,
    pos: &Position,
) -> Result<(Type, Vec<Type>), ReplaceError> {
    let mut t = term;
    let mut binders: Vec<Type> = Vec::new();
    for (k, &step) in pos.0.iter().enumerate() {
        t = match (t, step) {
            (Term::App(f, _), 1) => f,
            (Term::App(_, a), 2) => a,
            (Term::Abs(ty, b), 1) => {
                binders.push(ty.clone());
                b
            }
            (Term::Pair(a, _), 1) => a,
            (Term::Pair(_, b), 2) => b,
            (Term::Proj(_, a), 1) => a,
            _ => {
                return Err(ReplaceError::InvalidPosition(InvalidPosition(Position(
                    pos.0[..=k].to_vec(),
                ))))
            }
        };
    }
    let ty = typecheck_open(sig, ctx, &binders, t)?;
    Ok((ty, binders))
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReplaceError {
    #[error(transparent)]
    InvalidPosition(#[from] InvalidPosition),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("replacement mentions a bound variable not in scope at {0}")]
    EscapedBoundVariable(Position),
}

/// Scope- and type-checked subterm replacement: the replacement must have
/// the subterm's type in the ambient context extended with the binders in
/// scope at the position.
pub fn replace_at(
    sig: &Signature,
    ctx: &Context,
    term: &Term,
    pos: &Position,
    replacement: &Term,
) -> Result<Term, ReplaceError> {
    let (expected, binders) = type_at(sig, ctx, term, pos)?;
    if let Some(level) = replacement.max_loose_level() {
        if level >= binders.len() {
            return Err(ReplaceError::EscapedBoundVariable(pos.clone()));
        }
    }
    let actual = typecheck_open(sig, ctx, &binders, replacement)?;
    if actual != expected {
        return Err(ReplaceError::Type(TypeError::TypeMismatch(format!(
            "replacement at {pos} has type `{actual}` but `{expected}` is required"
        ))));
    }
    Ok(splice_at(term, pos, replacement.clone())?)
}

/// Convenience wrapper: the subterm at a position, with position validity
/// reported as an error.
pub fn subterm(term: &Term, pos: &Position) -> Result<Term, InvalidPosition> {
    subterm_at(term, pos).cloned()
}
