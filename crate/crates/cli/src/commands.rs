//! One function per subcommand, each filling a [`Report`].

use hkrlab::circlehopf::{cartier_dual_check, exterior, ext_colimit_tower, ext_self, AugmentedAlgebra};
use hkrlab::complexes::GroupReport;
use hkrlab::exactalg::{int, BaseRing, Scalar};
use hkrlab::fgl::{cartier_interpolation_check, distributions, interpolation_fgl, intvalued_structure, DividedPowerAlgebra};
use hkrlab::hochschild::{
    connes_on_forms, form_basis, hc_minus, hc_minus_de_rham, hkr_map, hochschild_homology, truncated_de_rham_homology,
};
use hkrlab::report::Check;
use hkrlab::witt::{build_witt_law, enumerate_kernel, KernelMap, Witt};
use hkrlab::Result;
use num_traits::Zero;

use crate::acceptance;
use crate::config::{parse_algebra, parse_finite_ring, Command, MapArg, Model, RunConfig};
use crate::report::{Report, Table};

fn torsion(g: &GroupReport) -> String {
    g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

fn joined(v: &[Scalar]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs a validated configuration.
pub fn dispatch(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new(cfg);
    match &cfg.command {
        Command::WittLaw { p, m } => witt_law(&mut r, *p, *m)?,
        Command::WittEnumerate { ring, p, m, map, a } => witt_enumerate(&mut r, ring, *p, *m, *map, a.as_deref())?,
        Command::Hh { algebra, degree, window } => {
            let a = parse_algebra(algebra).map_err(usage_to_core)?;
            let rows = r.stage("hochschild", || hochschild_homology(&a, *degree, *window))?;
            let mut t = Table::new("hh", &["n", "internal_degree", "free_rank", "torsion"]);
            for row in rows {
                t.push(vec![row.n.to_string(), row.internal_degree.to_string(), row.group.free_rank.to_string(), torsion(&row.group)]);
            }
            r.tables.push(t);
        }
        Command::Hcminus { algebra, degree, u, model } => {
            let a = parse_algebra(algebra).map_err(usage_to_core)?;
            let rows = r.stage("hc-minus", || match model {
                Model::Bar => hc_minus(&a, *u, *degree),
                Model::DeRham => hc_minus_de_rham(&a, *u, *degree),
            })?;
            let mut t = Table::new("hc_minus", &["n", "internal_degree", "free_rank", "torsion", "stable"]);
            for row in rows {
                t.push(vec![
                    row.n.to_string(),
                    row.internal_degree.to_string(),
                    row.group.free_rank.to_string(),
                    torsion(&row.group),
                    row.stable.to_string(),
                ]);
            }
            r.tables.push(t);
        }
        Command::Dr { algebra, degree, level } => {
            let a = parse_algebra(algebra).map_err(usage_to_core)?;
            let rows = r.stage("de-rham", || truncated_de_rham_homology(&a, *level, *degree))?;
            let mut t = Table::new("de_rham", &["n", "internal_degree", "free_rank", "torsion"]);
            for (n, g) in rows {
                t.push(vec![n.to_string(), degree.to_string(), g.free_rank.to_string(), torsion(&g)]);
            }
            r.tables.push(t);
        }
        Command::HkrCheck { algebra, degree, q_max } => hkr_check(&mut r, algebra, *degree, *q_max)?,
        Command::CircleExt { p, m_max, bound } => circle_ext(&mut r, *p, *m_max, *bound)?,
        Command::Cartier { p, m } => {
            let rep = r.stage("cartier", || cartier_dual_check(*p, *m))?;
            let mut t = Table::new("cartier", &["source", "image"]);
            for (s, i) in &rep.search.matched_basis {
                t.push(vec![s.clone(), i.clone()]);
            }
            r.tables.push(t);
            r.data("rank", rep.rank);
            r.data("candidates_tried", rep.search.candidates_tried);
            r.checks("cartier", rep.checks);
        }
        Command::Fgl { lambda, ring, n, p } => fgl(&mut r, *lambda, ring, *n, *p)?,
        Command::AllAcceptance => all_acceptance(&mut r),
    }
    if !cfg.timings {
        r.timings.clear();
    }
    Ok(r)
}

/// Validation already parsed these; a failure here means the config was not
/// validated first.
fn usage_to_core(e: crate::config::UsageError) -> hkrlab::Error {
    hkrlab::Error::Parse(e.to_string())
}

fn witt_law(r: &mut Report, p: u64, m: usize) -> Result<()> {
    let law = r.stage("build", || build_witt_law(p, m))?;
    let mut t = Table::new("witt_law", &["operation", "index", "polynomial"]);
    for (op, symbol, polys) in [
        ("sum", "S", &law.sum),
        ("product", "P", &law.product),
        ("negation", "N", &law.negation),
        ("frobenius", "F", &law.frobenius),
    ] {
        for (i, f) in polys.iter().enumerate() {
            t.push(vec![op.into(), format!("{symbol}_{i}"), f.to_string()]);
        }
    }
    r.tables.push(t);
    r.data("law", &*law);
    r.checks("build", [Check::pass(format!("W_{m} at p={p} has integer coefficients"))]);
    let failures = r.stage("naturality", || law.naturality().failures);
    r.checks("naturality", [Check::from_bool("ghost naturality", failures.is_empty(), || failures.join("; "))]);
    Ok(())
}

fn witt_enumerate(r: &mut Report, ring: &str, p: u64, m: usize, map: MapArg, a: Option<&str>) -> Result<()> {
    let fr = parse_finite_ring(ring).map_err(usage_to_core)?;
    let w = Witt::new(&fr, p, m)?;
    let map = match map {
        MapArg::FrobeniusMinusId => KernelMap::FrobeniusMinusId,
        MapArg::Frobenius => KernelMap::Frobenius,
        MapArg::GpAt => {
            let label = a.unwrap_or_default();
            KernelMap::GpAt(fr.parse(label).ok_or_else(|| hkrlab::Error::Parse(format!("'{label}' is not an element of {}", fr.kind())))?)
        }
    };
    let k = r.stage("enumerate", || enumerate_kernel(&w, &map))?;
    let mut t = Table::new("kernel", &["index", "coordinates"]);
    for (i, e) in k.elements.iter().enumerate() {
        t.push(vec![i.to_string(), e.coords.join(" ")]);
    }
    r.tables.push(t);
    r.data("size", k.size);
    r.data("exponent", k.exponent);
    r.data("is_cyclic", k.is_cyclic);
    r.checks("enumerate", [Check::from_bool("kernel is a subgroup", k.is_subgroup, || "not closed under subtraction".into())]);
    Ok(())
}

fn hkr_check(r: &mut Report, algebra: &str, degree: u32, q_max: usize) -> Result<()> {
    let a = parse_algebra(algebra).map_err(usage_to_core)?;
    let mut t = Table::new("hkr", &["q", "internal_degree", "form_rank", "free_rank", "torsion", "cycles", "isomorphism"]);
    let mut checks = Vec::new();
    r.stage("hkr", || -> Result<()> {
        for d in 0..=degree {
            for q in 0..=q_max {
                let (_, rep) = hkr_map(&a, q, d)?;
                let forms = form_basis(&a, q, d).len();
                checks.push(Check::from_bool(
                    format!("q={q} d={d}: antisymmetrization realizes HH_q = Omega^q"),
                    rep.isomorphism && rep.hh == GroupReport::free(forms),
                    || format!("HH {} vs {forms} forms (cycles: {}, isomorphism: {})", rep.hh, rep.cycles, rep.isomorphism),
                ));
                t.push(vec![
                    q.to_string(),
                    d.to_string(),
                    rep.form_rank.to_string(),
                    rep.hh.free_rank.to_string(),
                    torsion(&rep.hh),
                    rep.cycles.to_string(),
                    rep.isomorphism.to_string(),
                ]);
            }
        }
        Ok(())
    })?;
    r.tables.push(t);
    r.checks("hkr", checks);

    let mut checks = Vec::new();
    r.stage("connes", || -> Result<()> {
        for d in 0..=degree {
            for q in 0..q_max {
                let (induced, expected) = connes_on_forms(&a, q, d)?;
                checks.push(Check::from_bool(format!("q={q} d={d}: hkr^-1 B hkr = d_dR"), induced == expected, || {
                    format!("induced {induced:?} vs d_dR {expected:?}")
                }));
            }
        }
        Ok(())
    })?;
    r.checks("connes", checks);
    Ok(())
}

fn circle_ext(r: &mut Report, p: u64, m_max: u32, bound: usize) -> Result<()> {
    let ring = BaseRing::prime_field(p)?;
    let lam = AugmentedAlgebra::from_hopf(&exterior(ring, 1, 1)?)?;
    let table = r.stage("ext", || ext_self(&lam, bound))?;
    let mut t = Table::new("ext", &["s", "internal_degree", "weight", "cohomological_degree", "dim"]);
    for row in &table.rows {
        t.push(vec![
            row.s.to_string(),
            row.internal_degree.to_string(),
            row.weight.to_string(),
            row.cohomological_degree.to_string(),
            row.dim.to_string(),
        ]);
    }
    let polynomial = table.rows.len() == bound + 1
        && table.rows.iter().enumerate().all(|(s, row)| {
            let s = s as i64;
            row.dim == 1 && row.cohomological_degree == 2 * s && row.weight == -s
        });
    r.tables.push(t);
    r.checks("ext", [Check::from_bool("Ext is k[u] with u in degree 2, weight -1", polynomial, || format!("{:?}", table.dims()))]);
    let tower = r.stage("tower", || ext_colimit_tower(p, m_max))?;
    let mut t = Table::new("tower", &["m", "dims"]);
    for (m, dims) in tower.dims.iter().enumerate() {
        t.push(vec![(m + 1).to_string(), dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")]);
    }
    r.tables.push(t);
    r.data("colimit", &tower.colimit);
    r.data("transitions", &tower.transitions);
    r.checks("tower", tower.checks);
    Ok(())
}

fn fgl(r: &mut Report, lambda: i64, ring: &str, n: u32, p: Option<u64>) -> Result<()> {
    let ring: BaseRing = ring.parse()?;
    let law = r.stage("law", || interpolation_fgl(ring, &int(lambda), n.max(2)))?;
    r.data("series", law.series().to_string());
    let mut t = Table::new("law", &["i", "j", "coefficient"]);
    for i in 0..=n {
        for j in 0..=n - i {
            let c = law.coeff(i, j);
            if !c.is_zero() {
                t.push(vec![i.to_string(), j.to_string(), c.to_string()]);
            }
        }
    }
    r.tables.push(t);
    r.checks("law", law.axiom_checks());
    if matches!(ring, BaseRing::Integers | BaseRing::Rationals) {
        let d = r.stage("distributions", || distributions(&law, n))?;
        let mut t = Table::new("distributions", &["i", "j", "product"]);
        for i in 0..=n as usize {
            for j in 0..=n as usize {
                if let Some(prod) = d.product(i, j) {
                    t.push(vec![i.to_string(), j.to_string(), joined(prod)]);
                }
            }
        }
        r.tables.push(t);
        r.checks("distributions", d.axiom_checks());
        if lambda == 1 && n <= 8 {
            let iv = r.stage("integer-valued", || intvalued_structure(n))?;
            let same = (0..=n as usize).all(|i| {
                (0..=n as usize).all(|j| d.product(i, j) == Some(iv.product(i, j)))
                    && d.coproduct(i) == iv.coproduct(i)
                    && d.antipode(i) == iv.antipode(i)
            });
            r.checks("integer-valued", [Check::from_bool("distributions = integer-valued polynomials", same, || "structure constants differ".into())]);
            r.checks("integer-valued", iv.graded().checks.clone());
        }
        if lambda == 0 {
            let g = DividedPowerAlgebra::new(n);
            let same = (0..=n as usize).all(|i| (0..=n as usize).all(|j| d.product(i, j) == Some(&g.product(i, j)[..])));
            r.checks("divided-powers", [Check::from_bool("distributions = divided powers", same, || "products differ".into())]);
        }
    }
    if let Some(p) = p {
        let rep = r.stage("cartier", || cartier_interpolation_check(p, n))?;
        r.checks("cartier", rep.checks());
    }
    Ok(())
}

fn all_acceptance(r: &mut Report) {
    let mut t = Table::new("acceptance", &["criterion", "title", "checks", "passed"]);
    for c in &acceptance::CRITERIA {
        let checks = r.stage(&format!("criterion {}", c.id), || acceptance::run(c));
        let passed = checks.iter().filter(|c| c.passed()).count();
        t.push(vec![c.id.to_string(), c.title.into(), checks.len().to_string(), passed.to_string()]);
        r.checks(&format!("criterion {}", c.id), checks);
    }
    r.tables.push(t);
}
