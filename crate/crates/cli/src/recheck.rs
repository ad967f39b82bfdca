//! Independent re-verification of counterexamples in failing reports.

use num_rational::Rational64;
use serde_json::Value;

use amalgam_core::amalgam::{AmalgamContext, AmalgamWord, Side};
use amalgam_core::fingroup::SubgroupEmbedding;
use amalgam_core::shelah::{build_explicit_hull, build_special_relators, Conclusion, ShelahParams, VerificationReport};
use amalgam_core::smallcancel::{hull_of_set, CprimeViolation, HullMode, PieceWitness, Quotient, RelatorSet};

type Check = Result<(), String>;

fn ensure(cond: bool, what: &str) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

/// `x ∉ H`, `h ∈ H∖{e}` and `xhx⁻¹ ∈ H`.
pub fn malnormal_witness(emb: &SubgroupEmbedding, x: usize, h: usize) -> Check {
    let g = emb.sup();
    ensure(!emb.contains(x), "x lies in H")?;
    ensure(h != g.identity() && emb.contains(h), "h is not a nonidentity element of H")?;
    ensure(emb.contains(g.mul(g.mul(x, h), g.inv(x))), "x h x⁻¹ is not in H")
}

fn piece_of_both(ctx: &AmalgamContext, rels: &RelatorSet, r: &AmalgamWord, o: &AmalgamWord, p: &AmalgamWord) -> Check {
    ensure(rels.contains(r) && rels.contains(o), "relators are not in the hull")?;
    ensure(r != o, "the two relators coincide")?;
    ensure(ctx.is_semi_prefix(p, r), "piece is not a semi-prefix of the relator")?;
    ensure(ctx.is_semi_prefix(p, o), "piece is not a semi-prefix of the other relator")
}

pub fn piece_witness(ctx: &AmalgamContext, rels: &RelatorSet, w: &PieceWitness, bound: usize) -> Check {
    piece_of_both(ctx, rels, &w.relator, &w.other, &w.piece)?;
    ensure(w.piece.len() > bound, "piece is within the bound")
}

pub fn cprime_violation(ctx: &AmalgamContext, rels: &RelatorSet, lambda: Rational64, v: &CprimeViolation) -> Check {
    let (num, den) = (*lambda.numer(), *lambda.denom());
    match v {
        CprimeViolation::NotSymmetrized { .. } => {
            ensure(rels.closure_gap(ctx, HullMode::Full).is_some(), "set is closed")
        }
        CprimeViolation::TooShort { relator, length } => {
            ensure(rels.contains(relator) && relator.len() == *length, "relator length mismatch")?;
            ensure(den >= num * *length as i64, "1/λ < |r|")
        }
        CprimeViolation::LongPiece { relator, other, piece, length, relator_length } => {
            piece_of_both(ctx, rels, relator, other, piece)?;
            ensure(piece.len() == *length && relator.len() == *relator_length, "length mismatch")?;
            ensure(*length as i64 * den >= num * *relator_length as i64, "|p| < λ|r|")
        }
    }
}

fn word(v: &Value, key: &str) -> Result<AmalgamWord, String> {
    serde_json::from_value(v.get(key).cloned().ok_or(format!("missing `{key}`"))?).map_err(|e| format!("`{key}`: {e}"))
}

fn index(v: &Value, key: &str) -> Result<usize, String> {
    v.get(key).and_then(Value::as_u64).map(|x| x as usize).ok_or(format!("missing `{key}`"))
}

/// Membership decided by a Dehn trace that is replayed before use.
fn member(q: &Quotient, w: &AmalgamWord) -> Result<bool, String> {
    let t = q.dehn(w);
    t.verify(q.context(), q.relators(), q.lambda())?;
    Ok(t.member)
}

/// Re-checks the counterexample of one failed conclusion of a verifier
/// report against the quotient.
pub fn conclusion(q: &Quotient, a_seq: &[usize], c: &Conclusion) -> Check {
    let ctx = q.context();
    let cx = c.counterexample.as_ref().ok_or("no counterexample")?;
    match c.id.as_str() {
        "1" | "2" => {
            let (x, y) = (word(cx, "x")?, word(cx, "y")?);
            ensure(x != y, "x and y coincide in F")?;
            ensure(member(q, &ctx.mul(&ctx.invert(&x), &y))?, "x ≠ y in M")
        }
        "3" | "conclusion" => {
            let x = word(cx, "x")?;
            let y = match cx.get("y").and_then(Value::as_u64) {
                Some(k) => ctx.letter_word(Side::G, k as usize),
                None => word(cx, "y")?,
            };
            ensure(y.len() == 1 && y.first_side() == Some(Side::G), "y is not in G∖H")?;
            ensure(!q.is_in_gn(&x), "x ∈ GN")?;
            ensure(q.is_in_gn(&ctx.conjugate(&x, &y)), "x y x⁻¹ ∉ GN")
        }
        "4" => {
            let l = ctx.l();
            let (i, j) = (index(cx, "i")?, index(cx, "j")?);
            let inv = cx.get("inverse").and_then(Value::as_bool).ok_or("missing `inverse`")?;
            let (&ai, &aj) = (a_seq.get(i).ok_or("i out of range")?, a_seq.get(j).ok_or("j out of range")?);
            let w = ctx.product([
                &ctx.letter_word(Side::L, l.inv(ai)),
                &word(cx, "g")?,
                &ctx.letter_word(Side::L, if inv { l.inv(aj) } else { aj }),
                &word(cx, "g_prime")?,
            ]);
            ensure(member(q, &w)?, "the word is not in N")
        }
        "5" => {
            let w = word(cx, "word")?;
            let t = q.dehn(&w);
            t.verify(ctx, q.relators(), q.lambda())?;
            ensure(!t.member || t.steps.len() != 1, "the word reduces to e in one step")
        }
        "6" => ensure(member(q, &word(cx, "word")?)?, "the product is not trivial in M"),
        other => Err(format!("conclusion `{other}` has no independent recheck")),
    }
}

/// Re-checks the failed conclusions of a hull and piece-bound report
/// against freshly built hulls.
pub fn cprime_lemma(ctx: &AmalgamContext, p: &ShelahParams, rep: &VerificationReport) -> Check {
    let r = build_special_relators(ctx, p).map_err(|e| e.to_string())?;
    let generic = hull_of_set(ctx, &r, HullMode::Full).map_err(|e| e.to_string())?;
    for c in rep.conclusions.iter().filter(|c| !c.passed) {
        let cx = c.counterexample.as_ref().ok_or("no counterexample")?;
        let res = match c.id.as_str() {
            "hull" => {
                let explicit = build_explicit_hull(ctx, p).map_err(|e| e.to_string())?;
                match (
                    cx.get("only_in_generic").filter(|v| !v.is_null()),
                    cx.get("only_in_explicit").filter(|v| !v.is_null()),
                ) {
                    (Some(_), _) => {
                        let w = word(cx, "only_in_generic")?;
                        ensure(generic.contains(&w) && !explicit.contains(&w), "word is in both hulls")
                    }
                    (None, Some(_)) => {
                        let w = word(cx, "only_in_explicit")?;
                        ensure(explicit.contains(&w) && !generic.contains(&w), "word is in both hulls")
                    }
                    (None, None) => Err("empty difference".into()),
                }
            }
            "pieces" => {
                let (r, o, piece) = (word(cx, "relator")?, word(cx, "other")?, word(cx, "piece")?);
                piece_of_both(ctx, &generic, &r, &o, &piece)
                    .and_then(|_| ensure(piece.len() > 5, "piece is within the bound"))
            }
            "cprime" => {
                let lambda = p.lambda;
                let (num, den) = (*lambda.numer(), *lambda.denom());
                match cx.get("kind").and_then(Value::as_str) {
                    Some("too_short") => {
                        let r = word(cx, "relator")?;
                        ensure(generic.contains(&r) && den >= num * r.len() as i64, "1/λ < |r|")
                    }
                    Some("long_piece") => {
                        let (r, o, piece) = (word(cx, "relator")?, word(cx, "other")?, word(cx, "piece")?);
                        piece_of_both(ctx, &generic, &r, &o, &piece)
                            .and_then(|_| ensure(piece.len() as i64 * den >= num * r.len() as i64, "|p| < λ|r|"))
                    }
                    _ => Err("unrecognised violation".into()),
                }
            }
            other => Err(format!("conclusion `{other}` has no independent recheck")),
        };
        res.map_err(|e| format!("conclusion {}: {e}", c.id))?;
    }
    Ok(())
}
