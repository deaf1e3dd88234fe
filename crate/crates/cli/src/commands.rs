use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, ensure, Context, Result};
use serde_json::{json, Value};

use twisted_groupoid::algebra::{
    centralizer_irrep_sum, char_inner_product, count_irreps, decompose, double_rank_integral, double_rank_triple_sum,
    dpr_induce, drinfeld_double, elliptic_character, group_count_formula, rep_hom_dimension, restricted_algebra,
    character, Decomposition, EllipticRelation,
};
use twisted_groupoid::io::{complex_json, format_float, resolve_cocycle, resolve_group, GroupRepFile, LoadedCochain};
use twisted_groupoid::{
    transgress_at, AlgebraRep, FiniteGroup, Groupoid, LoopGroupoid, RetractionData, TwistedAlgebra,
};

const GRAM_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub enum Cmd {
    CheckCocycle,
    Transgress { times: usize },
    Double,
    Irreps,
    Count,
    Characters,
    Induce { at: usize, rep: Option<PathBuf> },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Cmd,
    pub group: Option<String>,
    pub cocycle: Option<String>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub verbosity: u8,
}

pub fn run(config: &RunConfig) -> Result<Value> {
    let input = load(config)?;
    log::info!("group {} of order {}, cocycle of degree {}", input.group.label(), input.group.order(), input.cochain.degree());
    match &config.command {
        Cmd::CheckCocycle => Ok(check_cocycle(&input)),
        Cmd::Transgress { times } => transgress(&input, *times),
        Cmd::Double => double(&input),
        Cmd::Irreps => irreps(&input, config.seed),
        Cmd::Count => count(&input),
        Cmd::Characters => characters(&input, config.seed),
        Cmd::Induce { at, rep } => induce(&input, *at, rep.as_deref(), config.seed),
    }
}

fn load(config: &RunConfig) -> Result<LoadedCochain> {
    let group = match &config.group {
        Some(spec) => Some(resolve_group(spec, None).with_context(|| format!("reading group {spec:?}"))?),
        None => None,
    };
    let spec = config.cocycle.as_deref().ok_or_else(|| anyhow!("--cocycle is required"))?;
    let loaded = resolve_cocycle(spec, group.as_ref()).with_context(|| format!("reading cocycle {spec:?}"))?;
    ensure!(loaded.cochain.degree() <= 3, "cocycle degree {} exceeds the supported maximum of 3", loaded.cochain.degree());
    Ok(loaded)
}

fn group_json(g: &FiniteGroup) -> Value {
    json!({"name": g.label(), "order": g.order()})
}

fn check_cocycle(input: &LoadedCochain) -> Value {
    let c = &input.cochain;
    let violation = c.cocycle_violation();
    let unnormalized = c.normalization_violation();
    json!({
        "group": group_json(&input.group),
        "degree": c.degree(),
        "cocycle": violation.is_none(),
        "normalized": unnormalized.is_none(),
        "violation": violation,
        "normalization_violation": unnormalized,
    })
}

/// One level of the loop-groupoid tower, with commuting tuples for objects
/// and underlying group elements for morphisms.
struct Level {
    lg: LoopGroupoid,
    tuples: Vec<Vec<usize>>,
    elements: Vec<usize>,
}

fn tower(group: &FiniteGroup, base: &Arc<Groupoid>, times: usize) -> Vec<Level> {
    let mut levels: Vec<Level> = Vec::new();
    let mut current = base.clone();
    for _ in 0..times {
        let lg = LoopGroupoid::new(current.clone());
        let (prev_tuples, prev_elements): (Vec<Vec<usize>>, Vec<usize>) = match levels.last() {
            Some(l) => (l.tuples.clone(), l.elements.clone()),
            None => (vec![Vec::new()], (0..group.order()).collect()),
        };
        let g = lg.groupoid();
        let tuples = (0..g.num_objects())
            .map(|o| {
                let gamma = lg.object_loop(o);
                let mut t = vec![prev_elements[gamma]];
                t.extend(&prev_tuples[current.src(gamma)]);
                t
            })
            .collect();
        let elements = (0..g.num_morphisms()).map(|m| prev_elements[lg.label(m).0]).collect();
        current = g.clone();
        levels.push(Level { lg, tuples, elements });
    }
    levels
}

fn transgress(input: &LoadedCochain, times: usize) -> Result<Value> {
    let c = &input.cochain;
    ensure!((1..=3).contains(&times), "--times must be 1, 2 or 3, got {times}");
    ensure!(c.degree() >= times, "cannot transgress a degree-{} cochain {times} times", c.degree());
    c.require_cocycle().context("input")?;
    let levels = tower(&input.group, c.base(), times);
    let mut out = c.clone();
    for l in &levels {
        out = out.transgress(&l.lg).context("transgression")?;
    }
    let top = levels.last().expect("times >= 1");
    let g = top.lg.groupoid();
    let objects: Vec<Value> = top.tuples.iter().map(|t| json!({"tuple": t})).collect();
    let morphisms: Vec<Value> = (0..g.num_morphisms())
        .map(|m| json!({"src": g.src(m), "dst": g.dst(m), "element": top.elements[m]}))
        .collect();
    let mut values = Vec::new();
    if out.degree() == 0 {
        out.for_each(|s, p| values.push(json!({"simplex": s, "phase": p.to_string()})));
    } else {
        out.for_each(|s, p| {
            if !p.is_trivial() {
                values.push(json!({"simplex": s, "phase": p.to_string()}));
            }
        });
    }
    let mut report = json!({
        "group": group_json(&input.group),
        "times": times,
        "input_degree": c.degree(),
        "degree": out.degree(),
        "groupoid": {"objects": objects, "morphisms": morphisms},
        "values": values,
        "cocycle": out.is_cocycle(),
        "normalized": out.is_normalized(),
    });
    if out.degree() == 0 {
        report["locally_constant"] = json!(out.is_cocycle());
    }
    Ok(report)
}

fn require_degree(input: &LoadedCochain, allowed: &[usize]) -> Result<()> {
    let d = input.cochain.degree();
    ensure!(allowed.contains(&d), "this command needs a cocycle of degree {allowed:?}, got {d}");
    input.cochain.require_cocycle()?;
    input.cochain.require_normalized()?;
    Ok(())
}

fn double(input: &LoadedCochain) -> Result<Value> {
    require_degree(input, &[3])?;
    let n = input.group.order();
    let d = drinfeld_double(&input.group, &input.cochain)?;
    let mut phases = Vec::new();
    for m2 in 0..n * n {
        for m1 in 0..n * n {
            if let Some((p, _)) = d.algebra.product(m2, m1) {
                if !p.is_trivial() {
                    phases.push(json!({"left": [m2 % n, m2 / n], "right": [m1 % n, m1 / n], "phase": p.to_string()}));
                }
            }
        }
    }
    Ok(json!({
        "group": group_json(&input.group),
        "dimension": d.algebra.dimension(),
        "closed_form_agrees": true,
        "nontrivial_phases": phases,
    }))
}

/// The algebra a cocycle defines: the twisted group algebra in degree 2,
/// the twisted Drinfeld double in degree 3.
fn algebra_of(input: &LoadedCochain) -> Result<TwistedAlgebra> {
    require_degree(input, &[2, 3])?;
    Ok(match input.cochain.degree() {
        2 => TwistedAlgebra::new(input.cochain.base(), input.cochain.clone())?,
        _ => drinfeld_double(&input.group, &input.cochain)?.algebra,
    })
}

struct Counts {
    center: usize,
    integral: i64,
    closed_form: i64,
    extra: Vec<(&'static str, i64)>,
}

fn counts(input: &LoadedCochain, alg: &TwistedAlgebra) -> Result<Counts> {
    let (g, c) = (&input.group, &input.cochain);
    let center = alg.center_dimension();
    let integral = count_irreps(alg.twist())?;
    let (closed_form, extra) = if c.degree() == 2 {
        (group_count_formula(g, c)?, Vec::new())
    } else {
        let triple = double_rank_triple_sum(g, c)?;
        let extra = vec![
            ("triple_sum", triple),
            ("triple_loop_integral", double_rank_integral(g, c)?),
            ("centralizer_sum", centralizer_irrep_sum(g, c)?),
        ];
        (triple, extra)
    };
    let all = [center as i64, integral, closed_form].into_iter().chain(extra.iter().map(|e| e.1));
    let values: Vec<i64> = all.collect();
    ensure!(values.iter().all(|&v| v == values[0]), "count routes disagree: {values:?}");
    Ok(Counts { center, integral, closed_form, extra })
}

fn decomposition(alg: &TwistedAlgebra, seed: u64, expected: usize) -> Result<Decomposition> {
    let dec = decompose(alg, seed)?;
    ensure!(dec.irreps.len() == expected, "decomposition found {} irreps, exact count is {expected}", dec.irreps.len());
    Ok(dec)
}

fn irreps(input: &LoadedCochain, seed: u64) -> Result<Value> {
    let alg = algebra_of(input)?;
    let k = counts(input, &alg)?;
    let dec = decomposition(&alg, seed, k.center)?;
    let irreps: Vec<Value> = dec
        .irreps
        .iter()
        .map(|ir| json!({"dim": ir.dimension(), "character": ir.character.values().iter().map(|&z| complex_json(z)).collect::<Vec<_>>()}))
        .collect();
    Ok(json!({
        "dimension": dec.algebra_dimension,
        "loops": dec.irreps.first().map(|ir| ir.character.loops().to_vec()).unwrap_or_default(),
        "irreps": irreps,
        "counts": {"center": k.center, "transgression_integral": k.integral, "closed_form": k.closed_form},
    }))
}

fn count(input: &LoadedCochain) -> Result<Value> {
    let alg = algebra_of(input)?;
    let k = counts(input, &alg)?;
    let mut routes = json!({"center": k.center, "transgression_integral": k.integral});
    if input.cochain.degree() == 2 {
        routes["group_formula"] = json!(k.closed_form);
        Ok(json!({"group": group_json(&input.group), "count": k.center, "routes": routes}))
    } else {
        for (name, v) in &k.extra {
            routes[*name] = json!(v);
        }
        Ok(json!({"group": group_json(&input.group), "rank": k.center, "routes": routes}))
    }
}

fn characters(input: &LoadedCochain, seed: u64) -> Result<Value> {
    let alg = algebra_of(input)?;
    let k = counts(input, &alg)?;
    let dec = decomposition(&alg, seed, k.center)?;
    let r = dec.irreps.len();
    let mut gram = Vec::with_capacity(r);
    for a in &dec.irreps {
        let mut row = Vec::with_capacity(r);
        for b in &dec.irreps {
            let ip = char_inner_product(&a.character, &b.character)?;
            let hom = rep_hom_dimension(&alg, &a.rep, &b.rep)?;
            ensure!(hom as f64 == ip.re.round(), "hom dimension {hom} disagrees with inner product {ip}");
            row.push(ip);
        }
        gram.push(row);
    }
    for (i, row) in gram.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            ensure!((z.re - target).abs() < GRAM_TOL && z.im.abs() < GRAM_TOL, "Gram matrix entry ({i}, {j}) is {z}");
        }
    }
    let elliptic = if input.cochain.degree() == 3 {
        let d = drinfeld_double(&input.group, &input.cochain)?;
        let rel = EllipticRelation::new(&input.group, &input.cochain)?;
        let mut out = Vec::new();
        for (i, ir) in dec.irreps.iter().enumerate() {
            let (ok, residual) = rel.check(&elliptic_character(&d, &ir.character));
            ensure!(ok, "irrep {i} fails the elliptic relation (residual {residual:e})");
            out.push(json!({"passed": ok, "residual": format_float(residual)}));
        }
        Some(out)
    } else {
        None
    };
    let irreps: Vec<Value> = dec
        .irreps
        .iter()
        .enumerate()
        .map(|(i, ir)| {
            let mut v = json!({"dim": ir.dimension(), "character": ir.character.values().iter().map(|&z| complex_json(z)).collect::<Vec<_>>()});
            if let Some(e) = &elliptic {
                v["elliptic"] = e[i].clone();
            }
            v
        })
        .collect();
    Ok(json!({
        "loops": dec.irreps.first().map(|ir| ir.character.loops().to_vec()).unwrap_or_default(),
        "irreps": irreps,
        "gram": gram.iter().map(|row| row.iter().map(|&z| complex_json(z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    }))
}

fn induce(input: &LoadedCochain, at: usize, rep: Option<&std::path::Path>, seed: u64) -> Result<Value> {
    require_degree(input, &[3])?;
    let (group, omega) = (&input.group, &input.cochain);
    group.element(at)?;
    let d = drinfeld_double(group, omega)?;
    let alg = &d.algebra;
    let object = d.loop_groupoid.loop_object(at).expect("every element is a loop of the delooping");
    let (restricted, autos) = restricted_algebra(alg, object)?;
    let (centralizer, tau_x) = transgress_at(omega, group, at)?;
    for i in 0..autos.len() {
        for j in 0..autos.len() {
            let (a, b) = (restricted.twist().value(&[i, j]), tau_x.value(&[i, j]));
            ensure!(a == b, "restricted twist {a} and pointed transgression {b} differ at ({i}, {j})");
        }
    }
    let rhos: Vec<AlgebraRep> = match rep {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file: GroupRepFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let ms = file.matrices()?;
            ensure!(ms.len() == autos.len(), "rep file has {} matrices, the centralizer has order {}", ms.len(), autos.len());
            vec![AlgebraRep::new(&restricted, vec![file.dim], ms).context("rep file is not a representation of the twisted centralizer algebra")?]
        }
        None => decompose(&restricted, seed)?.irreps.into_iter().map(|ir| ir.rep).collect(),
    };
    let data = RetractionData::with_basepoint(alg.base(), object);
    let component = alg.base().component_index()[object];
    let class: Vec<usize> = alg.base().components()[component].iter().map(|&o| d.loop_groupoid.object_loop(o)).collect();
    let mut reps = Vec::new();
    for rho in &rhos {
        let induced = dpr_induce(alg, &data, component, rho)?;
        let chi = character(alg, &induced)?;
        let endo = rep_hom_dimension(alg, &induced, &induced)?;
        reps.push(json!({
            "dim": induced.dimension(),
            "source_dim": rho.dimension(),
            "irreducible": endo == 1,
            "character": chi.values().iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
        }));
    }
    let loops = character(alg, &AlgebraRep::regular(alg))?.loops().to_vec();
    Ok(json!({
        "group": group_json(group),
        "at": at,
        "centralizer": centralizer.embedding,
        "class": class,
        "loops": loops,
        "induced": reps,
    }))
}
