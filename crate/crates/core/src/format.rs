//! JSON documents: walk specs, site unitary families and certificates.
//!
//! Walk file:
//!
//! ```json
//! {"form": "C1", "window": [-8, 8], "extension": {"kind": "periodic", "p": 1},
//!  "coins": [{"n": -8, "a": {"re": 0.7071, "im": 0.0}, "b": ..., "c": ..., "d": ...}]}
//! ```
//!
//! Complex numbers are `{"re": x, "im": y}` or `{"mag": m, "arg": angle}`,
//! angles `{"pi": [p, q]}` (exactly `pπ/q`) or `{"rad": x}`. A general walk
//! uses `"form": "general"` and a `"sites"` list with `xi_plus`, `xi_minus`,
//! `zeta_minus`, `zeta_plus` as pairs of complex numbers. Under a periodic
//! extension with period `p` it is enough to list one coin per residue class.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::canonical::SiteUnitaryFamily;
use crate::error::{Error, Result};
use crate::linalg::{Ket, Op2, C64};
use crate::szegedy::{shift_from_theta, SzegedyCertificate};
use crate::walk::{Amp, Coin2, Extension, Form, SiteBases, TypedClass, WalkSpec};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WalkFile {
    form: String,
    window: [i64; 2],
    extension: ExtensionRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coins: Option<Vec<CoinRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sites: Option<Vec<SiteRepr>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ExtensionRepr {
    Periodic { p: usize },
    ConstantTails,
    WindowOnly,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoinRepr {
    n: i64,
    a: AmpRepr,
    b: AmpRepr,
    c: AmpRepr,
    d: AmpRepr,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SiteRepr {
    n: i64,
    xi_plus: [AmpRepr; 2],
    xi_minus: [AmpRepr; 2],
    zeta_minus: [AmpRepr; 2],
    zeta_plus: [AmpRepr; 2],
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum AmpRepr {
    Cartesian { re: f64, im: f64 },
    Polar { mag: f64, arg: Angle },
}

impl From<Amp> for AmpRepr {
    fn from(a: Amp) -> Self {
        match a {
            Amp::Cartesian(z) => AmpRepr::Cartesian { re: z.re, im: z.im },
            Amp::Polar { mag, arg } => AmpRepr::Polar { mag, arg },
        }
    }
}

impl From<AmpRepr> for Amp {
    fn from(r: AmpRepr) -> Self {
        match r {
            AmpRepr::Cartesian { re, im } => Amp::new(re, im),
            AmpRepr::Polar { mag, arg } => Amp::polar(mag, arg),
        }
    }
}

fn cart(z: C64) -> AmpRepr {
    AmpRepr::Cartesian { re: z.re, im: z.im }
}

fn ket_repr(v: &Ket) -> [AmpRepr; 2] {
    [cart(v[0]), cart(v[1])]
}

fn ket_from(r: &[AmpRepr; 2]) -> Ket {
    Ket::new(Amp::from(r[0]).value(), Amp::from(r[1]).value())
}

fn json_error(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    let msg = format!("line {} column {}: {e}", e.line(), e.column());
    match e.classify() {
        Category::Data => Error::Schema(msg),
        _ => Error::Parse(msg),
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(json_error)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable document");
    s.push('\n');
    s
}

pub fn parse_walk_bytes(bytes: &[u8]) -> Result<WalkSpec> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(format!("not UTF-8: {e}")))?;
    parse_walk(text)
}

/// Parses and validates a walk file.
pub fn parse_walk(text: &str) -> Result<WalkSpec> {
    let w = parse_walk_unchecked(text)?;
    let report = w.validate();
    if let Some(issue) = report.issues.first() {
        return Err(Error::Validation(format!("site {}: {issue}", issue.site())));
    }
    Ok(w)
}

/// Parses a walk file without checking unitarity.
pub fn parse_walk_unchecked(text: &str) -> Result<WalkSpec> {
    let file: WalkFile = from_json(text)?;
    let [lo, hi] = file.window;
    if hi < lo {
        return Err(Error::Schema(format!("window [{lo}, {hi}] is empty")));
    }
    let extension = match file.extension {
        ExtensionRepr::Periodic { p } => Extension::Periodic(p),
        ExtensionRepr::ConstantTails => Extension::ConstantTails,
        ExtensionRepr::WindowOnly => Extension::WindowOnly,
    };
    let form = if file.form == "general" {
        let sites = file
            .sites
            .ok_or_else(|| Error::Schema("general form needs a \"sites\" list".into()))?;
        let by_site = collect_sites(sites.into_iter().map(|s| (s.n, s)), lo, hi, extension)?;
        Form::General(
            by_site
                .iter()
                .map(|s| SiteBases {
                    xi_plus: ket_from(&s.xi_plus),
                    xi_minus: ket_from(&s.xi_minus),
                    zeta_minus: ket_from(&s.zeta_minus),
                    zeta_plus: ket_from(&s.zeta_plus),
                })
                .collect(),
        )
    } else {
        let class = parse_class(&file.form)?;
        let coins = file
            .coins
            .ok_or_else(|| Error::Schema(format!("form {} needs a \"coins\" list", file.form)))?;
        let by_site = collect_sites(coins.into_iter().map(|c| (c.n, c)), lo, hi, extension)?;
        Form::Typed(
            class,
            by_site
                .iter()
                .map(|c| Coin2::new(c.a, c.b, c.c, c.d))
                .collect(),
        )
    };
    WalkSpec::new(form, lo, extension).map_err(|e| match e {
        Error::InvalidSpec(m) => Error::Schema(m),
        other => other,
    })
}

fn parse_class(s: &str) -> Result<TypedClass> {
    match s {
        "C1" | "c1" => Ok(TypedClass::C1),
        "C2" | "c2" => Ok(TypedClass::C2),
        "C3" | "c3" => Ok(TypedClass::C3),
        "C4" | "c4" => Ok(TypedClass::C4),
        other => Err(Error::Schema(format!("unknown form {other:?}; expected C1..C4 or general"))),
    }
}

/// Orders per-site entries over the window; under `Periodic(p)` a list with
/// exactly one entry per residue class is expanded.
fn collect_sites<T>(items: impl Iterator<Item = (i64, T)>, lo: i64, hi: i64, ext: Extension) -> Result<Vec<T>>
where
    T: Clone,
{
    let mut map: BTreeMap<i64, T> = BTreeMap::new();
    for (n, item) in items {
        if map.insert(n, item).is_some() {
            return Err(Error::Schema(format!("site {n} listed twice")));
        }
    }
    let len = (hi - lo + 1) as usize;
    if let Extension::Periodic(p) = ext {
        if p > 0 && map.len() == p && p < len {
            let mut by_residue: BTreeMap<i64, T> = BTreeMap::new();
            for (n, item) in &map {
                if by_residue.insert((n - lo).rem_euclid(p as i64), item.clone()).is_some() {
                    return Err(Error::Schema(format!("two coins share residue of site {n} mod {p}")));
                }
            }
            return Ok((0..len as i64).map(|i| by_residue[&(i % p as i64)].clone()).collect());
        }
    }
    if let Some(n) = map.keys().find(|n| !(lo..=hi).contains(*n)) {
        return Err(Error::Schema(format!("site {n} lies outside the window [{lo}, {hi}]")));
    }
    (lo..=hi)
        .map(|n| map.remove(&n).ok_or_else(|| Error::Schema(format!("no entry for site {n}"))))
        .collect()
}

/// Serializes a walk, listing every window site.
pub fn emit_walk(w: &WalkSpec) -> String {
    let (lo, hi) = w.window();
    let extension = match w.extension() {
        Extension::Periodic(p) => ExtensionRepr::Periodic { p },
        Extension::ConstantTails => ExtensionRepr::ConstantTails,
        Extension::WindowOnly => ExtensionRepr::WindowOnly,
    };
    let file = match w.form() {
        Form::Typed(k, coins) => WalkFile {
            form: k.to_string(),
            window: [lo, hi],
            extension,
            coins: Some(
                coins
                    .iter()
                    .zip(lo..)
                    .map(|(c, n)| CoinRepr {
                        n,
                        a: c.a.into(),
                        b: c.b.into(),
                        c: c.c.into(),
                        d: c.d.into(),
                    })
                    .collect(),
            ),
            sites: None,
        },
        Form::General(sites) => WalkFile {
            form: "general".into(),
            window: [lo, hi],
            extension,
            coins: None,
            sites: Some(
                sites
                    .iter()
                    .zip(lo..)
                    .map(|(s, n)| SiteRepr {
                        n,
                        xi_plus: ket_repr(&s.xi_plus),
                        xi_minus: ket_repr(&s.xi_minus),
                        zeta_minus: ket_repr(&s.zeta_minus),
                        zeta_plus: ket_repr(&s.zeta_plus),
                    })
                    .collect(),
            ),
        },
    };
    to_json(&file)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    window: [i64; 2],
    unitaries: Vec<UnitaryRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitaryRepr {
    n: i64,
    m: [[AmpRepr; 2]; 2],
}

/// `{"window": [a, b], "unitaries": [{"n": .., "m": [[z, z], [z, z]]}]}`.
pub fn emit_family(f: &SiteUnitaryFamily) -> String {
    let (lo, hi) = f.window();
    let unitaries = f
        .unitaries()
        .iter()
        .zip(lo..)
        .map(|(u, n)| UnitaryRepr {
            n,
            m: [[cart(u[(0, 0)]), cart(u[(0, 1)])], [cart(u[(1, 0)]), cart(u[(1, 1)])]],
        })
        .collect();
    to_json(&FamilyFile {
        window: [lo, hi],
        unitaries,
    })
}

pub fn parse_family(text: &str) -> Result<SiteUnitaryFamily> {
    let file: FamilyFile = from_json(text)?;
    let [lo, hi] = file.window;
    if hi < lo {
        return Err(Error::Schema(format!("window [{lo}, {hi}] is empty")));
    }
    let mut map: BTreeMap<i64, Op2> = BTreeMap::new();
    for u in &file.unitaries {
        let z = |r: AmpRepr| Amp::from(r).value();
        let m = Op2::new(z(u.m[0][0]), z(u.m[0][1]), z(u.m[1][0]), z(u.m[1][1]));
        if map.insert(u.n, m).is_some() {
            return Err(Error::Schema(format!("site {} listed twice", u.n)));
        }
    }
    let ops = (lo..=hi)
        .map(|n| map.remove(&n).ok_or_else(|| Error::Schema(format!("no unitary for site {n}"))))
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = map.keys().next() {
        return Err(Error::Schema(format!("site {n} lies outside the window [{lo}, {hi}]")));
    }
    SiteUnitaryFamily::new(lo, ops).map_err(|e| Error::Validation(e.to_string()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    lambda: Angle,
    theta: Vec<ThetaRepr>,
    phi: Vec<PhiRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThetaRepr {
    n: i64,
    angle: Angle,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiRepr {
    n: i64,
    v: [AmpRepr; 2],
}

/// `{"lambda": angle, "theta": [{"n", "angle"}], "phi": [{"n", "v"}]}`.
pub fn emit_certificate(c: &SzegedyCertificate) -> String {
    to_json(&CertificateFile {
        lambda: c.lambda,
        theta: c
            .theta
            .iter()
            .map(|(n, a)| ThetaRepr { n: *n, angle: *a })
            .collect(),
        phi: c.phi.iter().map(|(n, v)| PhiRepr { n: *n, v: ket_repr(v) }).collect(),
    })
}

/// Reads a certificate; the shift is rebuilt from the edge phases.
pub fn parse_certificate(text: &str) -> Result<SzegedyCertificate> {
    let file: CertificateFile = from_json(text)?;
    let theta: BTreeMap<i64, Angle> = file.theta.iter().map(|t| (t.n, t.angle)).collect();
    Ok(SzegedyCertificate {
        lambda: file.lambda,
        shift: shift_from_theta(&theta),
        theta,
        phi: file.phi.iter().map(|p| (p.n, ket_from(&p.v))).collect(),
    })
}
