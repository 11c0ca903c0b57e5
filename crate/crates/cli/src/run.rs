use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use fbt_core::bounds::{self, BoundValue, Lambda, SurfaceTopology};
use fbt_core::braid::{
    braid_count_bound, census, expand, lambda_tr_lower, lemma3a_check, lemma4_admissible, matrix_image, normal_form,
    theta, Ambient, BraidNormalForm, BraidWord,
};
use fbt_core::config3::{decode_braid, decode_word, in_h, ConfigLoop, PlaneLoop, Triple};
use fbt_core::conformal::{
    generator_upper_bounds, lambda_closed_form, prop1a_lambda3_upper, solve_grid, AnnulusSpec, BoundaryRule,
    GridDomain, SolverOptions, TorusWithHole,
};
use fbt_core::dbar::{
    self, cross_grid, demo_construct, demo_map, verify_dbar, write_samples_csv, DbarConfig, DemoConfig, KernelParams,
    Period,
};
use fbt_core::word::{
    cyclic_canonical, enumerate_words, enumerate_words_capped, is_primitive, l_minus, l_plus, syllables,
    tuple_canonical, word_count_bound, MonodromyTuple,
};
use fbt_core::{Error, FreeWord};

use crate::args::*;

/// 3 for solver non-convergence, 2 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NonConvergence { .. }) => 3,
        _ => 2,
    }
}

pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<()> {
    match cli.command {
        Command::Word(c) => word(c, out),
        Command::Braid(c) => braid(c, out),
        Command::Config3(c) => config3(c, out),
        Command::Conformal(c) => conformal(c, out),
        Command::Dbar(c) => dbar_cmd(c, out),
        Command::Bounds(c) => bounds_cmd(c, out),
    }
}

fn emit<W: Write, T: Serialize>(out: &mut W, v: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn parse_word(s: &str) -> Result<FreeWord> {
    Ok(s.parse::<FreeWord>()?)
}

fn parse_braid(s: &str) -> Result<BraidWord> {
    Ok(s.parse::<BraidWord>()?)
}

fn word_json(w: &FreeWord) -> Value {
    let syl: Vec<Value> = syllables(w)
        .iter()
        .map(|s| json!({"kind": s.kind.as_str(), "degree": s.degree}))
        .collect();
    json!({
        "word": w.to_string(),
        "l_minus": l_minus(w),
        "l_plus": l_plus(w),
        "syllables": syl,
    })
}

fn nf_json(nf: &BraidNormalForm) -> Value {
    match nf {
        BraidNormalForm::DeltaPower { l } => {
            json!({"kind": "delta-power", "j": null, "k": null, "b1": "", "l": l})
        }
        BraidNormalForm::General { j, k, b1, l } => {
            json!({"kind": "general", "j": j, "k": k, "b1": b1.to_string(), "l": l})
        }
    }
}

fn braid_json(b: &BraidWord) -> Result<Value> {
    let nf = normal_form(b)?;
    let img = matrix_image(b);
    // the center acts as -I with exponent sum 6
    let (matrix, exponent_sum) = match b.ambient() {
        Ambient::B3 => (img.matrix.clone(), img.exponent_sum.clone()),
        Ambient::ModCenter => (img.projective(), ((&img.exponent_sum % 6) + 6) % 6),
    };
    Ok(json!({
        "braid": b.to_string(),
        "ambient": b.ambient().as_str(),
        "normal_form": nf_json(&nf),
        "expanded": expand(&nf, b.ambient()).to_string(),
        "matrix": matrix,
        "exponent_sum": exponent_sum.to_string(),
    }))
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(a), Value::Object(b)) = (a.as_object_mut(), b) {
        a.extend(b);
    }
    a
}

fn csv_writer<W: Write>(out: &mut W) -> csv::Writer<&mut W> {
    csv::Writer::from_writer(out)
}

fn word(c: WordCmd, out: &mut impl Write) -> Result<()> {
    match c {
        WordCmd::Linv { word } => emit(out, &word_json(&parse_word(&word)?)),
        WordCmd::Enum { budget, cap, format } => {
            let words = match cap {
                Some(cap) => enumerate_words_capped(budget, cap)?,
                None => enumerate_words(budget)?,
            };
            match format {
                Format::Json => emit(
                    out,
                    &json!({
                        "budget": budget,
                        "count": words.len(),
                        "bound": BoundValue::from(word_count_bound(budget)),
                        "words": words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    }),
                ),
                Format::Csv => {
                    let mut wr = csv_writer(out);
                    wr.write_record(["word", "l_minus", "l_plus"])?;
                    for w in &words {
                        wr.write_record([w.to_string(), l_minus(w).to_string(), l_plus(w).to_string()])?;
                    }
                    wr.flush()?;
                    Ok(())
                }
            }
        }
        WordCmd::Canon { words, g, m } => {
            let ws = words.iter().map(|s| parse_word(s)).collect::<Result<Vec<_>>>()?;
            match (g, m) {
                (Some(g), Some(m)) => {
                    let t = MonodromyTuple::new(g, m, ws)?;
                    let canon = tuple_canonical(&t);
                    let strs = |t: &MonodromyTuple| t.entries().iter().map(|w| w.to_string()).collect::<Vec<_>>();
                    emit(
                        out,
                        &json!({"g": g, "m": m, "entries": strs(&t), "canonical": strs(&canon)}),
                    )
                }
                _ => {
                    if ws.len() != 1 {
                        bail!(Error::InvalidArgument(
                            "give one word, or --g and --m with a tuple of words".into()
                        ));
                    }
                    let w = &ws[0];
                    let primitive = match is_primitive(w) {
                        Ok(p) => Value::Bool(p),
                        Err(Error::IdentityPrimitivity) => Value::Null,
                        Err(e) => return Err(e.into()),
                    };
                    emit(
                        out,
                        &json!({
                            "word": w.to_string(),
                            "canonical": cyclic_canonical(w).to_string(),
                            "primitive": primitive,
                        }),
                    )
                }
            }
        }
    }
}

fn braid(c: BraidCmd, out: &mut impl Write) -> Result<()> {
    match c {
        BraidCmd::Nf { braid } => emit(out, &braid_json(&parse_braid(&braid)?)?),
        BraidCmd::Theta { braid } => {
            let b = parse_braid(&braid)?;
            let w = theta(&b)?;
            let v = merge(
                json!({"braid": b.to_string(), "normal_form": nf_json(&normal_form(&b)?)}),
                word_json(&w),
            );
            emit(out, &v)
        }
        BraidCmd::Census { budget, format } => {
            let list = census(budget)?;
            match format {
                Format::Json => {
                    let items = list
                        .iter()
                        .map(|b| -> Result<Value> {
                            let w = theta(b)?;
                            Ok(json!({
                                "braid": b.to_string(),
                                "normal_form": nf_json(&normal_form(b)?),
                                "theta": w.to_string(),
                                "l_minus": l_minus(&w),
                            }))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    emit(
                        out,
                        &json!({
                            "budget": budget,
                            "count": list.len(),
                            "bound": BoundValue::from(braid_count_bound(budget)),
                            "braids": items,
                        }),
                    )
                }
                Format::Csv => {
                    let mut wr = csv_writer(out);
                    wr.write_record(["braid", "theta", "l_minus"])?;
                    for b in &list {
                        let w = theta(b)?;
                        wr.write_record([b.to_string(), w.to_string(), l_minus(&w).to_string()])?;
                    }
                    wr.flush()?;
                    Ok(())
                }
            }
        }
        BraidCmd::Bracket { braid, lambda, k, k2 } => {
            let mut v = json!({});
            if braid.is_none() && k.is_none() {
                bail!(Error::InvalidArgument("give a braid, or --k, --k2 and --lambda".into()));
            }
            if let Some(s) = braid {
                let b = parse_braid(&s)?;
                let admissible = match lambda {
                    Some(l) => Value::Bool(lemma4_admissible(&b, l)?),
                    None => Value::Null,
                };
                v = merge(
                    v,
                    json!({
                        "braid": b.to_string(),
                        "lambda_tr_lower": lambda_tr_lower(&b)?,
                        "lemma4_admissible": admissible,
                    }),
                );
            }
            if let (Some(k), Some(k2), Some(l)) = (k, k2, lambda) {
                v = merge(v, json!({"k": k, "k2": k2, "lemma3a": lemma3a_check(k, k2, l)?}));
            }
            if let Some(l) = lambda {
                v = merge(v, json!({"lambda": l}));
            }
            emit(out, &v)
        }
    }
}

fn open(p: &Path) -> Result<BufReader<File>> {
    let f = File::open(p).map_err(|e| Error::InvalidArgument(format!("cannot open {}: {e}", p.display())))?;
    Ok(BufReader::new(f))
}

fn create(p: &Path) -> Result<BufWriter<File>> {
    let f = File::create(p).map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", p.display())))?;
    Ok(BufWriter::new(f))
}

fn parse_point(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("point must be re,im: {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = a.trim().parse().map_err(|_| bad())?;
    let im: f64 = b.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn config3(c: Config3Cmd, out: &mut impl Write) -> Result<()> {
    match c {
        Config3Cmd::DecodeBraid { file } => {
            let lp = ConfigLoop::read_csv(open(&file)?)?;
            emit(out, &braid_json(&decode_braid(&lp)?)?)
        }
        Config3Cmd::DecodeWord { file } => {
            let lp = PlaneLoop::read_csv(open(&file)?)?;
            emit(out, &word_json(&decode_word(&lp)?))
        }
        Config3Cmd::InH { points, tol } => {
            let p = points.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>>>()?;
            let t = Triple::new(p[0], p[1], p[2])?;
            let pts: Vec<[f64; 2]> = t.points().iter().map(|z| [z.re, z.im]).collect();
            emit(out, &json!({"in_h": in_h(&t, tol)?, "points": pts, "tol": tol}))
        }
    }
}

fn read_spec(s: &str) -> Result<AnnulusSpec> {
    let text = if s.trim_start().starts_with('{') {
        s.to_string()
    } else {
        std::fs::read_to_string(s).map_err(|e| Error::InvalidArgument(format!("cannot read {s}: {e}")))?
    };
    let spec: AnnulusSpec = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("domain spec: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

fn conformal(c: ConformalCmd, out: &mut impl Write) -> Result<()> {
    match c {
        ConformalCmd::Lambda { spec } => {
            let spec = read_spec(&spec)?;
            emit(out, &json!({"spec": spec, "lambda": lambda_closed_form(&spec)?}))
        }
        ConformalCmd::Grid {
            spec,
            h,
            rule,
            tol,
            max_iter,
            nodes,
        } => {
            let spec = read_spec(&spec)?;
            let d = match spec {
                AnnulusSpec::Round { r, big_r } => {
                    let rule = match rule {
                        Rule::Staircase => BoundaryRule::Staircase,
                        Rule::Fractional => BoundaryRule::Fractional,
                    };
                    GridDomain::annulus(r, big_r, h, rule)?
                }
                _ => GridDomain::from_spec(&spec, h)?,
            };
            let sol = solve_grid(&d, &SolverOptions { tol, max_iter })?;
            if let Some(p) = nodes {
                sol.write_nodes_csv(&d, create(&p)?)?;
            }
            emit(out, &sol.report)
        }
        ConformalCmd::TorusBounds { alpha, sigma } => {
            let x = TorusWithHole::new(alpha, sigma)?;
            emit(
                out,
                &json!({
                    "alpha": alpha,
                    "sigma": sigma,
                    "generators": generator_upper_bounds(&x),
                    "lambda3_upper": prop1a_lambda3_upper(&x),
                }),
            )
        }
    }
}

fn target_power(target: &str) -> Result<(u32, i64)> {
    let w = parse_word(target)?;
    match w.terms() {
        [t] => Ok((t.gen, t.exp)),
        _ => bail!(Error::InvalidArgument(format!(
            "target must be a1^n or a2^n with n != 0, got {target:?}"
        ))),
    }
}

fn dbar_cmd(c: DbarCmd, out: &mut impl Write) -> Result<()> {
    match c {
        DbarCmd::Kernel { alpha, n, re, im } => {
            let p = KernelParams::new(alpha, n)?;
            let z = Complex64::new(re, im);
            let pair = |v: Complex64| [v.re, v.im];
            emit(
                out,
                &json!({
                    "alpha": alpha,
                    "n": n,
                    "z": pair(z),
                    "nu": pair(p.nu),
                    "wp": pair(dbar::wp(&p, z)?),
                    "wp_nu": pair(dbar::wp_nu(&p, z)?),
                    "tail_bound": {
                        "wp": {"real": dbar::wp_tail_bound(&p, z, Period::Real),
                               "imaginary": dbar::wp_tail_bound(&p, z, Period::Imaginary)},
                        "wp_nu": {"real": dbar::wp_nu_tail_bound(&p, z, Period::Real),
                                  "imaginary": dbar::wp_nu_tail_bound(&p, z, Period::Imaginary)},
                    },
                }),
            )
        }
        DbarCmd::Solve(a) => {
            let (gen, n) = target_power(&a.target)?;
            let cfg = DbarConfig {
                alpha: a.alpha,
                delta: a.delta,
                epsilon: a.epsilon,
                n_trunc: a.n,
                quad_nx: a.quad_nx,
                quad_ny: a.quad_ny,
                c1: a.c1,
                c2: a.c2,
            };
            let g = demo_map(a.alpha, a.rho, gen, n);
            let check = verify_dbar(&g, &cfg)?;
            if let Some(p) = a.samples {
                let phi = dbar::blend_and_phi(&g, &cfg)?;
                let grid = cross_grid(cfg.alpha, cfg.sigma(), cfg.delta);
                let f = dbar::solve_dbar(&phi, &cfg.kernel()?, &grid)?;
                let samples: Vec<_> = grid.into_iter().zip(f).collect();
                write_samples_csv(create(&p)?, &samples)?;
            }
            emit(out, &check)
        }
        DbarCmd::Demo(a) => {
            let target = parse_word(&a.target)?;
            let dc = DemoConfig {
                delta: a.delta,
                rho: a.rho,
                n_trunc: a.n,
                quad_nx: a.quad_nx,
                quad_ny: a.quad_ny,
                loop_samples: a.loop_samples,
            };
            let res = demo_construct(a.alpha, a.sigma, &target, &dc)?;
            if let Some(p) = a.samples {
                write_samples_csv(create(&p)?, &res.samples)?;
            }
            emit(out, &res.report)
        }
    }
}

fn list<T>(opt: &Option<String>, name: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let s = opt
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(format!("table needs --{name}")))?;
    let items = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse)
        .collect::<Result<Vec<_>>>()?;
    if items.is_empty() {
        bail!(Error::InvalidArgument(format!("empty sweep for --{name}")));
    }
    Ok(items)
}

fn real(s: &str) -> Result<f64> {
    parse_real(s).map_err(|e| anyhow!(Error::Parse(e)))
}

fn count(s: &str) -> Result<u32> {
    s.parse().map_err(|_| anyhow!(Error::Parse(format!("bad count {s:?}"))))
}

fn bounds_cmd(c: BoundsCmd, out: &mut impl Write) -> Result<()> {
    match c {
        BoundsCmd::Thm1 { g, m, lambda4, lambda3 } => {
            let t = SurfaceTopology::new(g, m);
            let r = match (lambda4, lambda3) {
                (Some(l), None) => bounds::thm1_report(t, l, Lambda::Four)?,
                (None, Some(l)) => bounds::thm1_report(t, l, Lambda::Three)?,
                _ => bail!(Error::InvalidArgument(
                    "give exactly one of --lambda4, --lambda3".into()
                )),
            };
            emit(out, &r)
        }
        BoundsCmd::Thm2 { g, m, lambda8 } => emit(out, &bounds::thm2_report(SurfaceTopology::new(g, m), lambda8)?),
        BoundsCmd::Thm3 { g, m, lambda8 } => emit(out, &bounds::thm3_report(SurfaceTopology::new(g, m), lambda8)?),
        BoundsCmd::Prop1a {
            alpha,
            sigma,
            direction,
            c_big,
            c_small,
        } => match direction {
            Direction::Upper => emit(out, &bounds::prop1a_upper_report(alpha, sigma)?),
            Direction::Lower => {
                let (Some(cb), Some(cs)) = (c_big, c_small) else {
                    bail!(Error::InvalidArgument(
                        "the lower bound needs --c-big and --c-small; they have no default".into()
                    ));
                };
                emit(out, &bounds::prop1a_lower_report(alpha, sigma, cb, cs)?)
            }
        },
        BoundsCmd::Prop1b {
            sigma,
            c1,
            c2,
            c1p,
            c2p,
        } => {
            let [hi, lo] = bounds::prop1b_reports(sigma, c1, c2, c1p, c2p)?;
            emit(out, &json!({"upper": hi, "lower": lo}))
        }
        BoundsCmd::Table(a) => table(a, out),
    }
}

fn table(a: TableArgs, out: &mut impl Write) -> Result<()> {
    // collect rows first so that a failing row leaves stdout empty
    let mut rows: Vec<Vec<String>> = Vec::new();
    let header: Vec<&str>;
    let ln_dec = |x: fbt_core::LogNumber| [x.ln().to_string(), x.to_scientific(3)];
    match a.kind {
        TableKind::Thm1 | TableKind::Thm2 | TableKind::Thm3 => {
            header = vec!["g", "m", "lambda", "ln", "decimal"];
            let (gs, ms, ls) = (
                list(&a.g, "g", count)?,
                list(&a.m, "m", count)?,
                list(&a.lambda, "lambda", real)?,
            );
            for &g in &gs {
                for &m in &ms {
                    for &l in &ls {
                        let t = SurfaceTopology::new(g, m);
                        let x = match a.kind {
                            TableKind::Thm1 => bounds::thm1_bound(t, l)?,
                            TableKind::Thm2 => bounds::thm2_bound(t, l)?,
                            _ => bounds::thm3_bound(t, l)?,
                        };
                        let [ln, dec] = ln_dec(x);
                        rows.push(vec![g.to_string(), m.to_string(), l.to_string(), ln, dec]);
                    }
                }
            }
        }
        TableKind::Prop1aUpper => {
            header = vec!["alpha", "sigma", "ln", "decimal"];
            for al in list(&a.alpha, "alpha", real)? {
                for s in list(&a.sigma, "sigma", real)? {
                    let [ln, dec] = ln_dec(bounds::prop1a_upper(al, s)?);
                    rows.push(vec![al.to_string(), s.to_string(), ln, dec]);
                }
            }
        }
        TableKind::Reducible => {
            header = vec!["g", "m", "ln", "decimal"];
            for g in list(&a.g, "g", count)? {
                for m in list(&a.m, "m", count)? {
                    let [ln, dec] = ln_dec(bounds::reducible11_bound(SurfaceTopology::new(g, m)));
                    rows.push(vec![g.to_string(), m.to_string(), ln, dec]);
                }
            }
        }
        TableKind::Words | TableKind::Census => {
            header = vec!["budget", "count", "bound_ln"];
            for y in list(&a.budget, "budget", real)? {
                let (n, b) = if a.kind == TableKind::Words {
                    (enumerate_words(y)?.len(), word_count_bound(y))
                } else {
                    (census(y)?.len(), braid_count_bound(y))
                };
                rows.push(vec![y.to_string(), n.to_string(), b.ln().to_string()]);
            }
        }
        TableKind::Random => {
            header = vec!["g", "m", "lambda", "thm1_ln", "thm2_ln", "thm3_ln"];
            if a.samples == 0 {
                bail!(Error::InvalidArgument("empty sweep: --samples 0".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            for _ in 0..a.samples {
                let g: u32 = rng.gen_range(0..6);
                let m: u32 = rng.gen_range(0..6);
                let l: f64 = rng.gen_range(0.0..5.0);
                let t = SurfaceTopology::new(g, m);
                rows.push(vec![
                    g.to_string(),
                    m.to_string(),
                    l.to_string(),
                    bounds::thm1_bound(t, l)?.ln().to_string(),
                    bounds::thm2_bound(t, l)?.ln().to_string(),
                    bounds::thm3_bound(t, l)?.ln().to_string(),
                ]);
            }
        }
    }
    let mut wr = csv_writer(out);
    wr.write_record(&header)?;
    for r in rows {
        wr.write_record(&r)?;
    }
    wr.flush().context("writing table")?;
    Ok(())
}
