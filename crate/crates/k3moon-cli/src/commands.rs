use k3moon::exactcore::poly::{cyclotomic_factors, cyclotomic_poly, expand_rational};
use k3moon::exactcore::series::{qexp_to_q, QDEN};
use k3moon::exactcore::{fmt_q, q, qi, Poly, RationalFunction, Series, Q};
use k3moon::fgdata::geometric_fg;
use k3moon::genus::*;
use k3moon::modforms::weak_jacobi_phi;
use k3moon::n4char::*;
use k3moon::replattice::audit::{alpha_audit, fit_rational_form, integrality_audit};
use k3moon::replattice::lattices::{lattice_report, mukai_lattice_n, sufficiency_scan};
use k3moon::replattice::m23::{m23_family, m_chi_rational, decompose_m23_family};
use k3moon::replattice::DataDir;
use k3moon::verify::{self, VerifyConfig};
use k3moon::Error;

use crate::report::Report;
use crate::{Cli, Cmd};

pub fn run(cli: &Cli, data: &DataDir) -> Result<Report, Error> {
    let t = cli.q_order * QDEN;
    match &cli.cmd {
        Cmd::Ellgenus => ellgenus(t),
        Cmd::Equivariant { class } => equivariant(class, t),
        Cmd::Symt { class, terms, rational } => symt(data, class, *terms, *rational),
        Cmd::N4Decompose { terms, sector } => n4_decompose(*terms, *sector, cli.q_order),
        Cmd::GenusDecompose { terms } => genus_decompose(*terms),
        Cmd::LatticeCheck => lattice_check(data),
        Cmd::M23Table { rational } => m23_table(data, cli.t_order as usize, *rational),
        Cmd::MoonshineVerify { class } => moonshine_verify(data, class.as_deref(), t),
        Cmd::AuditIntegrality { terms } => audit(data, *terms, cli.t_order as usize),
        Cmd::VerifyAll => verify_all(data, cli),
    }
}

fn symplectic(label: &str) -> Result<SymplecticClass, Error> {
    SymplecticClass::from_label(label)
        .or_else(|| SymplecticClass::ALL.into_iter().find(|g| g.m24_label().eq_ignore_ascii_case(label)))
        .ok_or_else(|| Error::Domain(format!("unknown symplectic class {label:?}")))
}

fn series_rows(s: &Series<Q>) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for e in s.q_levels() {
        for (y2, z, c) in s.level(e) {
            let mut r = vec![fmt_q(&qexp_to_q(e)), fmt_q(&q(y2 as i64, 2)), fmt_q(&c)];
            if z != 0 {
                r.push(z.to_string());
            }
            rows.push(r);
        }
    }
    rows
}

fn ellgenus(t: i64) -> Result<Report, Error> {
    let mut r = Report::new("ellgenus");
    let e = elliptic_genus(t);
    r.block("elliptic genus chi_{-y}(q, LX)", &["q", "y", "coeff"], series_rows(&e));
    let phi = weak_jacobi_phi(0, t)?.scale(&qi(2));
    let same = e.agree(&phi);
    r.verdict("equals 2 phi_0,1", same.is_ok(), same.err().map(|m| m.to_string()).unwrap_or_default());
    let c = euler_constant(&e)?;
    r.verdict("Euler specialization", c == qi(24), fmt_q(&c));
    Ok(r)
}

fn equivariant(class: &str, t: i64) -> Result<Report, Error> {
    let g = symplectic(class)?;
    let mut r = Report::new("equivariant");
    let s = equivariant_elliptic_genus(g, t)?;
    r.block(&format!("twining genus of {}", g.label()), &["q", "y", "coeff"], series_rows(&s));
    let c = euler_constant(&s)?;
    let fp = fixed_points(g).map(|f| f.count()).unwrap_or(24);
    r.verdict("Euler specialization equals fixed-point count", c == qi(fp as i64), format!("{} vs {fp}", fmt_q(&c)));
    let sp = jacobi_split(&s)?;
    r.block(
        "split e/12 phi_0,1 + f phi_-2,1",
        &["e", "f"],
        vec![vec![fmt_q(&(sp.a.clone() * qi(12))), q_coefficients(&sp.h).iter().map(fmt_q).collect::<Vec<_>>().join(" ")]],
    );
    Ok(r)
}

fn show_rational(f: &RationalFunction) -> Vec<Vec<String>> {
    let den = match cyclotomic_factors(f.den()) {
        Ok(fs) => fs
            .iter()
            .map(|&(n, k)| if k == 1 { format!("Phi_{n}(t)") } else { format!("Phi_{n}(t)^{k}") })
            .collect::<Vec<_>>()
            .join(" "),
        Err(_) => f.den().to_string(),
    };
    vec![vec![f.num().coeffs().iter().map(fmt_q).collect::<Vec<_>>().join(" "), den]]
}

fn symt(data: &DataDir, class: &str, terms: usize, rational: bool) -> Result<Report, Error> {
    let mut r = Report::new("symt");
    let (label, series, form) = if let Ok(g) = symplectic(class) {
        let s = chi_symt_series(g, terms)?;
        let f = if rational { Some(rational_form(g)?) } else { None };
        (g.label().to_string(), s, f)
    } else if ["2B", "4A"].contains(&class.to_ascii_uppercase().as_str()) {
        let fg = data.fg()?;
        let up = class.to_ascii_uppercase();
        let den: &[u64] = if up == "2B" { &[2, 2, 4] } else { &[2, 4, 8] };
        let fit = fit_rational_form(&fg, &up, den, terms.max(12) - 1)?;
        let num = Poly::new(fit.numerator.iter().map(|c| k3moon::exactcore::parse_q(c)).collect::<Result<_, _>>()?);
        let d = den.iter().fold(Poly::one(), |a, &n| a.mul(&cyclotomic_poly(n)));
        let f = RationalFunction::new(num, d)?;
        (format!("{up} (M24)"), expand_rational(&f, terms)?, rational.then_some(f))
    } else {
        let forms = data.forms()?;
        let want = format!("r_{}", class.to_ascii_uppercase());
        let sf = forms
            .iter()
            .find(|f| f.name == want)
            .ok_or_else(|| Error::Domain(format!("unknown class {class:?}")))?;
        let f = sf.function()?;
        (sf.class.clone(), expand_rational(&f, terms)?, rational.then_some(f))
    };
    if let Some(f) = &form {
        r.block(&format!("r_{label}"), &["numerator (t^0 first)", "denominator"], show_rational(f));
    }
    let rows = series.iter().enumerate().map(|(n, c)| vec![n.to_string(), fmt_q(c)]).collect();
    r.block(&format!("chi({label}; X, S^n T)"), &["n", "coeff"], rows);
    Ok(r)
}

fn n4_decompose(rows: u32, sector: Sector, q_order: i64) -> Result<Report, Error> {
    let mut r = Report::new("n4-decompose");
    let cols = 12usize;
    let table = vn_multiplicity_table(rows, cols);
    let mut header = vec!["N".to_string(), "atypical".to_string()];
    header.extend((0..cols).map(|c| format!("{c}")));
    let body: Vec<Vec<String>> = table
        .iter()
        .map(|row| {
            let mut v = vec![row.n.to_string(), row.atypical.to_string()];
            v.extend(row.typical.iter().cloned());
            v
        })
        .collect();
    r.block("multiplicities; column c is weight c + 1/4", &header, body);
    // direct decomposition of the characters in the requested sector
    let t = q_order * QDEN;
    let direct = rows.min(5);
    for n in 0..direct {
        let s = match sector {
            Sector::NS => ch_vn_closed(n, t).series,
            Sector::Ramond => ch_mn(n, t).series,
        };
        let d = decompose_into_n4(&s, sector)?;
        let known = (q_order - 1).max(0) as usize;
        let ok = d.atypical == qi(table[n as usize].atypical)
            && (0..known.min(cols)).all(|c| fmt_q(&d.at(&(q(1, 4) + qi(c as i64)))) == table[n as usize].typical[c]);
        r.verdict(format!("{sector:?} decomposition of N = {n}"), ok, format!("to weight {}", known));
    }
    Ok(r)
}

fn genus_decompose(terms: usize) -> Result<Report, Error> {
    let mut r = Report::new("genus-decompose");
    let (a0, a) = genus_a_coefficients_phi((terms as i64 + 1) * QDEN)?;
    let mut rows = vec![vec!["atypical".to_string(), fmt_q(&a0)]];
    rows.extend(a.iter().take(terms).enumerate().map(|(n, x)| vec![format!("A_{n}"), fmt_q(x)]));
    r.block("Ramond decomposition of chi_y(q, LX)", &["term", "multiplicity"], rows);
    r.verdict("atypical multiplicity", a0 == qi(24), fmt_q(&a0));
    let cc = symmetric_power_crosscheck(terms.min(5).saturating_sub(1))?;
    let rows = cc
        .iter()
        .map(|c| {
            vec![
                c.n.to_string(),
                format!("{:?}", c.derived),
                c.listed.as_ref().map(|l| format!("{l:?}")).unwrap_or_default(),
                c.a_from_bundle.to_string(),
                c.a_from_genus.to_string(),
            ]
        })
        .collect();
    r.block("bundle cross-check (multiplicity of S^j T)", &["n", "derived", "listed", "A from bundle", "A from genus"], rows);
    for c in &cc {
        r.verdict(format!("bundle combination n = {}", c.n), c.agrees, format!("A_{} = {}", c.n, c.a_from_genus));
    }
    Ok(r)
}

fn lattice_check(data: &DataDir) -> Result<Report, Error> {
    let mut r = Report::new("lattice-check");
    let mukai = data.mukai()?;
    let rep = lattice_report(&data.m24()?, &data.m23()?, &data.co0()?, &mukai)?;
    r.block("basis of N (values at orders 1..8)", &["1", "2", "3", "4", "5", "6", "7", "8"], rep.n_basis.clone());
    r.block("M/N", &["invariant factors"], vec![vec![rep.m_mod_n.join(" ")]]);
    let rows = rep
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            vec![
                format!("H{}", i + 1),
                c.group.clone(),
                c.orders.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
                c.factors.join(" x "),
            ]
        })
        .collect();
    r.block("N_i/N", &["i", "group", "orders", "invariant factors"], rows);
    r.verdict("K = N", rep.k_equals_n, "M24");
    r.verdict("K' = N", rep.k1_equals_n, "M23");
    r.verdict("[N : K''] = 2", rep.k2_index == "2", format!("index {}", rep.k2_index));
    r.verdict("M/N = (2, 4, 24, 40320)", rep.m_mod_n == verify::M_MOD_N, rep.m_mod_n.join(" "));
    let (n, comps) = mukai_lattice_n(&mukai)?;
    let s = sufficiency_scan(&n, &comps)?;
    r.verdict("H1, H5, H6 with one of H2, H3, H4 give N", s.sufficient_fours, "");
    r.verdict("no three groups give N", s.no_three_suffice, "");
    Ok(r)
}

fn m23_table(data: &DataDir, terms: usize, rational: bool) -> Result<Report, Error> {
    let mut r = Report::new("m23-table");
    let t = data.m23()?;
    let fam = m23_family(&t, &data.forms()?, None)?;
    let dec = decompose_m23_family(&t, &fam, terms)?;
    let mut header = vec!["n".to_string()];
    header.extend(dec.names.iter().cloned());
    let rows = dec
        .rows
        .iter()
        .enumerate()
        .map(|(n, row)| std::iter::once(n.to_string()).chain(row.iter().map(fmt_q)).collect())
        .collect();
    r.block("multiplicities in -chi(X, S^n T)", &header, rows);
    r.verdict(
        "integral multiplicities",
        dec.first_nonintegral.is_none(),
        dec.first_nonintegral.map(|(n, j)| format!("t^{n}, {}", dec.names[j])).unwrap_or_default(),
    );
    if rational {
        let m = m_chi_rational(&t, &fam)?;
        let rows = m
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    c.function.num().degree().map(|d| d.to_string()).unwrap_or_default(),
                    c.function.den().degree().map(|d| d.to_string()).unwrap_or_default(),
                    fmt_q(&c.pole4),
                ]
            })
            .collect();
        r.block("multiplicity of chi in chi(X, S_t T)", &["chi", "deg P", "deg Q", "coefficient of (t-1)^-4"], rows);
        r.verdict("all pole coefficients negative", m.iter().all(|c| c.pole4 < Q::from_integer(0.into())), "");
    }
    Ok(r)
}

fn moonshine_verify(data: &DataDir, class: Option<&str>, t: i64) -> Result<Report, Error> {
    let mut r = Report::new("moonshine-verify");
    let fg = data.fg()?;
    let classes: Vec<SymplecticClass> = match class {
        Some(c) => vec![symplectic(c)?],
        None => SymplecticClass::ALL.to_vec(),
    };
    let geo = geometric_fg((t / QDEN) as usize)?;
    for g in classes {
        let rec = fg.get(g.m24_label()).ok_or_else(|| Error::Data(format!("no f_g for {}", g.m24_label())))?;
        let m = verify_moonshine_class(g, &rec.series(), t)?;
        r.verdict(format!("{} twining genus", g.label()), m.agrees, m.first_mismatch.unwrap_or_default());
        let mine = geo.records.iter().find(|x| x.class == g.label()).map(|x| &x.coeffs);
        let n = mine.map(Vec::len).unwrap_or(0).min(rec.coeffs.len());
        let same = mine.is_some_and(|c| c[..n] == rec.coeffs[..n]) && rec.e == euler_number(g) as i64;
        r.verdict(format!("{} f_g from fixed points", g.label()), same, format!("{n} coefficients"));
    }
    Ok(r)
}

fn audit(data: &DataDir, terms: usize, t_order: usize) -> Result<Report, Error> {
    let mut r = Report::new("audit-integrality");
    let fg = data.fg()?;
    let rows = integrality_audit(&fg, terms)?;
    let body = rows
        .iter()
        .map(|x| {
            vec![
                x.class.clone(),
                x.first_nonintegral.as_ref().map(|(n, v)| format!("t^{n}: {v}")).unwrap_or_else(|| "-".into()),
                x.coefficients.join(" "),
            ]
        })
        .collect();
    r.block("traces on S^n T from twining genera", &["class", "first non-integral", "coefficients"], body);
    for x in rows.iter().filter(|x| x.matches_geometric.is_some()) {
        r.verdict(format!("{} matches fixed-point traces", x.class), x.matches_geometric == Some(true), "");
    }
    let a = alpha_audit(&fg, "15AB", 5)?;
    r.block("15AB with free trace alpha on T", &["base", "slope"], vec![vec![a.base.join(" "), a.slope.join(" ")]]);
    r.verdict("15AB admits no integral alpha", !a.integral_alpha_exists, "");
    let tmax = t_order.saturating_sub(1).max(8);
    let mut body = Vec::new();
    for (c, den) in [("2B", &[2u64, 2, 4][..]), ("4A", &[2, 4, 8][..])] {
        let f = fit_rational_form(&fg, c, den, tmax)?;
        body.push(vec![f.class.clone(), f.numerator.join(" "), format!("{:?}", f.denominator), f.terms_checked.to_string()]);
        r.verdict(format!("{c} palindromic of degree deg - 2"), f.palindromic && f.degree_two_less, "");
    }
    r.block("M24 classes 2B, 4A", &["class", "numerator", "cyclotomic factors", "terms"], body);
    Ok(r)
}

fn verify_all(data: &DataDir, cli: &Cli) -> Result<Report, Error> {
    let mut r = Report::new("verify-all");
    let mut cfg = VerifyConfig::new(data.clone());
    cfg.q_order = cli.q_order;
    cfg.t_order = cli.t_order as usize;
    for c in verify::run_all(&cfg) {
        r.verdict(format!("criterion {}: {}", c.id, c.name), c.passed, c.detail);
    }
    Ok(r)
}
