use serde_json::{json, Map, Value};
use tensor_spectra::boolean_flat::{cont_iso, orthogonalize, BoolElem, RingIdeal};
use tensor_spectra::idealcalc::freemod::spec_free_modules;
use tensor_spectra::idealcalc::{
    chain_spectrum, check_diagram_budget, functor_kernel_ideal, gram_matrix, gram_report, radical_report,
    schur_on_unit, schur_vanishes, IdealRef, ProbeWindow, TensorPrimeTag,
};
use tensor_spectra::linalg::{nullspace, rank, Subspace};
use tensor_spectra::projcat::enumerate_serre_ideals;
use tensor_spectra::scalars::{fmt_rational, int, Rational};
use tensor_spectra::spectral::{patch, PointSet, SpectralSpaceDesc};
use tensor_spectra::supereval::{check_budget, kernel_basis, SuperSpace};
use tensor_spectra::wbcat::{HomSpace, WBMorphism, Word};

use crate::args::{BooleanAction, Command, TArg, PQ};

/// The canonical request: command name and normalized parameters.
pub fn request(cmd: &Command) -> Value {
    let (name, params) = match cmd {
        Command::Hom { word, coword } => {
            ("hom", json!({ "word": word.to_string(), "coword": target(word, coword).to_string() }))
        }
        Command::Gram { word, coword, t } => (
            "gram",
            json!({ "word": word.to_string(), "coword": target(word, coword).to_string(), "t": t.to_string() }),
        ),
        Command::Radical { n, max_r, max_word_len, max_power } => {
            ("radical", json!({ "n": n, "max_r": max_r, "max_word_len": max_word_len, "max_power": max_power }))
        }
        Command::Kernel { kernel, word, coword, max_word_len } => (
            "kernel",
            match word {
                Some(w) => {
                    json!({ "kernel": pq(kernel), "word": w.to_string(), "coword": target(w, coword).to_string() })
                }
                None => json!({ "kernel": pq(kernel), "max_word_len": max_word_len }),
            },
        ),
        Command::Chain { n, max_r, max_word_len } => {
            ("chain", json!({ "n": n, "max_r": max_r, "max_word_len": max_word_len }))
        }
        Command::Schur { lambda, kernel, t } => {
            ("schur", json!({ "lambda": lambda.to_string(), "kernel": kernel.as_ref().map(pq), "t": t.to_string() }))
        }
        Command::Boolean { action: BooleanAction::Orth { atoms, gens } } => {
            ("boolean", json!({ "action": "orth", "atoms": atoms, "gens": gens.replace(' ', "") }))
        }
        Command::Boolean { action: BooleanAction::Ideals { ring } } => {
            ("boolean", json!({ "action": "ideals", "ring": ring.to_string() }))
        }
        Command::Projcat { ring } => ("projcat", json!({ "ring": ring.to_string() })),
        Command::Spec { ring, samples, seed } => {
            ("spec", json!({ "ring": ring.to_string(), "samples": samples, "seed": seed }))
        }
        Command::Patch { space, set } => {
            ("patch", json!({ "space": space.trim(), "set": set.as_deref().map(str::trim) }))
        }
    };
    json!({ "command": name, "params": params })
}

fn target<'a>(word: &'a Word, coword: &'a Option<Word>) -> &'a Word {
    coword.as_ref().unwrap_or(word)
}

fn pq(k: &PQ) -> String {
    format!("{},{}", k.p, k.q)
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn compute(cmd: &Command) -> Result<Value, String> {
    match cmd {
        Command::Hom { word, coword } => hom(word, target(word, coword)),
        Command::Gram { word, coword, t } => gram(word, target(word, coword), t),
        Command::Radical { n, max_r, max_word_len, max_power } => {
            let r = radical_report(*n, *max_r, *max_power, &ProbeWindow::words_up_to(*max_word_len)).map_err(err)?;
            Ok(r.to_report().to_json())
        }
        Command::Kernel { kernel, word, coword, max_word_len } => match word {
            Some(w) => kernel_pair(*kernel, w, target(w, coword)),
            None => {
                let span =
                    functor_kernel_ideal(kernel.p, kernel.q, &ProbeWindow::words_up_to(*max_word_len)).map_err(err)?;
                let mut v = serde_json::to_value(&span).map_err(err)?;
                v["kernel"] = json!(format!("P({}|{})", kernel.p, kernel.q));
                Ok(v)
            }
        },
        Command::Chain { n, max_r, max_word_len } => {
            let c = chain_spectrum(*n, *max_r, &ProbeWindow::words_up_to(*max_word_len)).map_err(err)?;
            Ok(c.to_report().to_json())
        }
        Command::Schur { lambda, kernel, t } => {
            let TArg::At(alpha) = t else {
                return Err("schur needs a rational --t".into());
            };
            let tag = match kernel {
                Some(k) => {
                    if int(k.p as i64 - k.q as i64) != *alpha {
                        return Err(format!(
                            "P({}|{}) lives at t = {}, not t = {t}",
                            k.p,
                            k.q,
                            k.p as i64 - k.q as i64
                        ));
                    }
                    TensorPrimeTag::FunctorKernel { p: k.p, q: k.q }
                }
                None => TensorPrimeTag::TraceRadical { alpha: alpha.clone() },
            };
            let vanishes = schur_vanishes(lambda, IdealRef::Prime(&tag), alpha).map_err(err)?;
            Ok(json!({
                "lambda": lambda.to_string(),
                "ideal": tag.to_string(),
                "t": t.to_string(),
                "vanishes": vanishes,
                "unit_scalar": fmt_rational(&schur_on_unit(lambda)),
            }))
        }
        Command::Boolean { action: BooleanAction::Orth { atoms, gens } } => boolean_orth(*atoms, gens),
        Command::Boolean { action: BooleanAction::Ideals { ring } } => {
            let alg = ring.bool_algebra();
            let rows: Vec<Value> = alg
                .elements()
                .map(|e| {
                    let ideal = RingIdeal::supported_in(ring, e);
                    json!({
                        "support": e.to_string(),
                        "idempotent": ring.idempotent(&e).to_string(),
                        "prime": ideal.is_prime(),
                        "idempotents_in_ideal": alg.principal_ideal(&e).len(),
                    })
                })
                .collect();
            let theta = cont_iso(ring).map_err(err)?;
            Ok(json!({
                "ring": ring.to_string(),
                "ideals": rows,
                "count": rows.len(),
                "spec_points": theta.points(),
            }))
        }
        Command::Projcat { ring } => {
            let serre = enumerate_serre_ideals(ring).map_err(err)?;
            let rows: Vec<Value> = serre
                .iter()
                .map(|s| {
                    json!({
                        "support": s.support.to_string(),
                        "ideal_idempotent": ring.idempotent(&s.ideal.canonical()).to_string(),
                        "prime_ideal": s.ideal.is_prime(),
                    })
                })
                .collect();
            Ok(json!({ "ring": ring.to_string(), "serre_ideals": rows, "count": serre.len() }))
        }
        Command::Spec { ring, samples, seed } => {
            Ok(spec_free_modules(ring, *samples, *seed).map_err(err)?.to_report().to_json())
        }
        Command::Patch { space, set } => patch_cmd(space, set.as_deref()),
    }
}

fn hom(a: &Word, b: &Word) -> Result<Value, String> {
    check_diagram_budget(a, b).map_err(err)?;
    let space = HomSpace::new(a, b);
    let diagrams: Vec<Value> = (0..space.dim())
        .map(|k| {
            let edges: Vec<String> = space.diagram(k).edges().iter().map(|(i, j)| format!("{i}-{j}")).collect();
            json!({ "index": k, "edges": edges.join(" ") })
        })
        .collect();
    Ok(json!({
        "source": a.to_string(),
        "target": b.to_string(),
        "dim": space.dim(),
        "points": format!("source 0..{}, target {}..{}", a.len(), a.len(), a.len() + b.len()),
        "diagrams": diagrams,
    }))
}

fn morphisms(space: &HomSpace, alpha: &Rational, sub: &Subspace) -> Vec<String> {
    sub.basis().iter().map(|v| WBMorphism::from_vector(space, alpha, v).to_string()).collect()
}

fn gram(a: &Word, b: &Word, t: &TArg) -> Result<Value, String> {
    let alpha = match t {
        TArg::Generic => {
            let mut v = serde_json::to_value(gram_report(a, b).map_err(err)?).map_err(err)?;
            v["t"] = json!("generic");
            return Ok(v);
        }
        TArg::At(alpha) => alpha,
    };
    check_diagram_budget(a, b).map_err(err)?;
    let g = gram_matrix(a, b, alpha);
    let n = g.len();
    let transposed: Vec<Vec<Rational>> = (0..n).map(|e| g.iter().map(|row| row[e].clone()).collect()).collect();
    let kernel = Subspace::span(n, nullspace(&transposed, n));
    Ok(json!({
        "source": a.to_string(),
        "target": b.to_string(),
        "t": t.to_string(),
        "hom_dim": n,
        "rank": rank(&g),
        "kernel_dim": kernel.dim(),
        "kernel_basis": morphisms(&HomSpace::new(a, b), alpha, &kernel),
    }))
}

fn kernel_pair(k: PQ, a: &Word, b: &Word) -> Result<Value, String> {
    check_budget(SuperSpace::new(k.p, k.q), a, b).map_err(err)?;
    check_diagram_budget(a, b).map_err(err)?;
    let alpha = int(k.p as i64 - k.q as i64);
    let kernel = kernel_basis(a, b, k.p, k.q).map_err(err)?;
    Ok(json!({
        "source": a.to_string(),
        "target": b.to_string(),
        "kernel": format!("P({}|{})", k.p, k.q),
        "t": fmt_rational(&alpha),
        "hom_dim": kernel.ambient(),
        "kernel_dim": kernel.dim(),
        "kernel_basis": morphisms(&HomSpace::new(a, b), &alpha, &kernel),
    }))
}

/// Generators as `;`-separated lists of 1-based atoms, e.g. `1,2;2,3`.
fn parse_gens(atoms: usize, gens: &str) -> Result<Vec<BoolElem>, String> {
    gens.split(';')
        .map(|g| {
            let idx = g
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| match x.trim().parse::<usize>() {
                    Ok(i) if (1..=atoms).contains(&i) => Ok(i - 1),
                    _ => Err(format!("atom {x:?} is not in 1..={atoms}")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            BoolElem::from_indices(atoms, idx).map_err(err)
        })
        .collect()
}

fn boolean_orth(atoms: usize, gens: &str) -> Result<Value, String> {
    if atoms == 0 || atoms > 64 {
        return Err(format!("--atoms must be in 1..=64, got {atoms}"));
    }
    let gens = parse_gens(atoms, gens)?;
    let (family, principal) = orthogonalize(&gens).map_err(err)?;
    Ok(json!({
        "atoms": atoms,
        "generators": gens.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "orthogonal": family.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "principal": principal.to_string(),
    }))
}

fn patch_cmd(space: &str, set: Option<&str>) -> Result<Value, String> {
    let space: SpectralSpaceDesc = space.parse().map_err(err)?;
    let cons = patch(&space);
    let mut out = Map::new();
    out.insert("space".into(), json!(space.to_string()));
    out.insert("patch".into(), json!(cons.to_string()));
    out.insert("zariski_hausdorff".into(), json!(space.is_hausdorff()));
    out.insert("patch_hausdorff".into(), json!(cons.is_hausdorff()));
    if let Some(s) = set {
        let s = PointSet::parse(&space, s).map_err(err)?;
        out.insert("zariski_closed".into(), json!(space.is_closed(&s).map_err(err)?));
        out.insert("zariski_open".into(), json!(space.is_open(&s).map_err(err)?));
        out.insert("patch_closed".into(), json!(cons.is_closed(&s).map_err(err)?));
        out.insert("patch_open".into(), json!(cons.is_open(&s).map_err(err)?));
    }
    Ok(Value::Object(out))
}
