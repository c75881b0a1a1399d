//! JSON schemas for inputs and reports, CSV output and config hashing.
//!
//! Points of RP^1 are written as numbers or the string "inf"; points of
//! CP^1 as [re, im] pairs or "inf".

use crate::ads3::{AcausalPolygon, EinPoint, HullComplexAdS, WidthReport};
use crate::earthquake::{EarthquakeSpec, FiniteLamination, GeodesicH2, Handedness, Leaf};
use crate::error::{Error, Result};
use crate::hyp3::HullComplexH3;
use crate::mobius::{CircleMap, CirclePoint, ExactForm, Interp, MobiusReal, CP1};
use crate::surface_forms::{Ambient, SurfaceJet};
use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

/// A point of RP^1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealJson(pub CirclePoint);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawReal {
    Num(f64),
    Tag(String),
}

impl Serialize for RealJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinity() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0.to_f64())
        }
    }
}

impl<'de> Deserialize<'de> for RealJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawReal::deserialize(d)? {
            RawReal::Num(x) if x.is_finite() => Ok(RealJson(CirclePoint::from_real(x))),
            RawReal::Tag(t) if t == "inf" => Ok(RealJson(CirclePoint::infinity())),
            _ => Err(serde::de::Error::custom("expected a finite number or \"inf\"")),
        }
    }
}

/// A point of CP^1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexJson(pub CP1);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Pair([f64; 2]),
    Tag(String),
}

impl Serialize for ComplexJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinity() {
            s.serialize_str("inf")
        } else {
            let z = self.0.to_complex();
            [z.re, z.im].serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for ComplexJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawComplex::deserialize(d)? {
            RawComplex::Pair([re, im]) if re.is_finite() && im.is_finite() => {
                Ok(ComplexJson(CP1::from_complex(Complex64::new(re, im))))
            }
            RawComplex::Tag(t) if t == "inf" => Ok(ComplexJson(CP1::infinity())),
            _ => Err(serde::de::Error::custom("expected [re, im] or \"inf\"")),
        }
    }
}

fn reals(v: &[RealJson]) -> Vec<CirclePoint> {
    v.iter().map(|r| r.0).collect()
}

fn default_marked(n: usize) -> [usize; 3] {
    [0, n / 3, 2 * n / 3]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafJson {
    pub p: RealJson,
    pub q: RealJson,
    pub w: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaminationJson {
    pub leaves: Vec<LeafJson>,
}

impl LaminationJson {
    pub fn to_lamination(&self) -> Result<FiniteLamination> {
        let leaves = self
            .leaves
            .iter()
            .map(|l| Ok(Leaf { geodesic: GeodesicH2::new(l.p.0, l.q.0)?, weight: l.w }))
            .collect::<Result<Vec<_>>>()?;
        FiniteLamination::new(leaves)
    }

    pub fn from_lamination(l: &FiniteLamination) -> Self {
        LaminationJson {
            leaves: l
                .leaves()
                .iter()
                .map(|x| LeafJson { p: RealJson(x.geodesic.p), q: RealJson(x.geodesic.q), w: x.weight })
                .collect(),
        }
    }
}

pub fn parse_handedness(s: &str) -> Result<Handedness> {
    match s {
        "left" => Ok(Handedness::Left),
        "right" => Ok(Handedness::Right),
        _ => Err(schema(format!("side must be \"left\" or \"right\", got {s:?}"))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ExactJson {
    Earthquake {
        side: String,
        leaves: Vec<LeafJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<[f64; 2]>,
    },
    Mobius {
        matrix: [[f64; 2]; 2],
    },
}

impl ExactJson {
    pub fn to_exact(&self) -> Result<ExactForm> {
        match self {
            ExactJson::Earthquake { side, leaves, base } => {
                let lam = LaminationJson { leaves: leaves.clone() }.to_lamination()?;
                let hand = parse_handedness(side)?;
                let spec = match base {
                    Some([re, im]) => EarthquakeSpec::new(lam, hand, Complex64::new(*re, *im))?,
                    None => EarthquakeSpec::with_default_base(lam, hand)?,
                };
                Ok(ExactForm::Earthquake(spec))
            }
            ExactJson::Mobius { matrix: [[a, b], [c, d]] } => Ok(ExactForm::Mobius(MobiusReal::new(*a, *b, *c, *d)?)),
        }
    }
}

fn parse_interp(s: &str) -> Result<Interp> {
    match s {
        "pl-angle" => Ok(Interp::PlAngle),
        "pw-moebius" => Ok(Interp::PwMoebius),
        _ => Err(schema(format!("interp must be \"pl-angle\" or \"pw-moebius\", got {s:?}"))),
    }
}

fn pw_moebius() -> String {
    Interp::PwMoebius.name().to_string()
}

/// Samples plus interpolation; with `exact`, the y values are recomputed
/// from the closed form and may be omitted (any value is ignored).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleMapJson {
    pub samples: Vec<(RealJson, RealJson)>,
    #[serde(default = "pw_moebius")]
    pub interp: String,
    #[serde(default)]
    pub exact: Option<ExactJson>,
}

impl CircleMapJson {
    pub fn to_map(&self) -> Result<CircleMap> {
        let xs: Vec<CirclePoint> = self.samples.iter().map(|s| s.0 .0).collect();
        match &self.exact {
            Some(e) => CircleMap::from_exact(xs, e.to_exact()?),
            None => {
                let ys = self.samples.iter().map(|s| s.1 .0).collect();
                CircleMap::from_samples(xs, ys, parse_interp(&self.interp)?)
            }
        }
    }

    /// Samples and interpolation only; closed forms are not written back.
    pub fn from_map(m: &CircleMap) -> Self {
        CircleMapJson {
            samples: m.xs().iter().zip(m.ys()).map(|(x, y)| (RealJson(*x), RealJson(*y))).collect(),
            interp: m.interp().name().to_string(),
            exact: None,
        }
    }
}

/// Acausal (or, with `achronal`, achronal) polygon in Ein^{1,1}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonJson {
    pub points: Vec<(RealJson, RealJson)>,
    #[serde(default)]
    pub marked: Option<[usize; 3]>,
    #[serde(default)]
    pub achronal: bool,
}

impl PolygonJson {
    pub fn to_polygon(&self) -> Result<AcausalPolygon> {
        let pts: Vec<EinPoint> = self.points.iter().map(|(x, y)| EinPoint::new(x.0, y.0)).collect();
        let marked = self.marked.unwrap_or(default_marked(pts.len()));
        if self.achronal {
            AcausalPolygon::achronal(pts, marked)
        } else {
            AcausalPolygon::new(pts, marked)
        }
    }

    pub fn from_polygon(p: &AcausalPolygon) -> Self {
        PolygonJson {
            points: p.points.iter().map(|e| (RealJson(e.p), RealJson(e.q))).collect(),
            marked: Some(p.marked),
            achronal: false,
        }
    }
}

/// Ideal vertex set in CP^1, in curve order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealPointsJson {
    pub points: Vec<ComplexJson>,
    #[serde(default)]
    pub marked: Option<[usize; 3]>,
}

impl IdealPointsJson {
    pub fn points(&self) -> Vec<CP1> {
        self.points.iter().map(|p| p.0).collect()
    }

    pub fn marked(&self) -> [usize; 3] {
        self.marked.unwrap_or(default_marked(self.points.len()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetJson {
    pub ambient: String,
    #[serde(rename = "I")]
    pub first: [[f64; 2]; 2],
    #[serde(rename = "B")]
    pub shape: [[f64; 2]; 2],
}

fn m2(a: &[[f64; 2]; 2]) -> Matrix2<f64> {
    Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1])
}

fn rows(m: &Matrix2<f64>) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

impl JetJson {
    pub fn to_jet(&self) -> Result<SurfaceJet> {
        let amb = Ambient::parse(&self.ambient).ok_or_else(|| schema(format!("unknown ambient {:?}", self.ambient)))?;
        SurfaceJet::new(m2(&self.first), m2(&self.shape), amb)
    }

    pub fn from_jet(j: &SurfaceJet) -> Self {
        JetJson { ambient: j.ambient().name().to_string(), first: rows(&j.first_form()), shape: rows(&j.shape()) }
    }
}

fn default_budget() -> usize {
    10_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfigJson {
    pub oracle: String,
    pub grid: Vec<RealJson>,
    pub target: CircleMapJson,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub restarts: Option<usize>,
    #[serde(default)]
    pub marked: Option<[usize; 3]>,
}

impl SolveConfigJson {
    pub fn grid(&self) -> Vec<CirclePoint> {
        reals(&self.grid)
    }

    pub fn marked(&self) -> [usize; 3] {
        self.marked.unwrap_or(default_marked(self.grid.len()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceH3Json {
    pub vertices: Vec<usize>,
    pub plane: [f64; 4],
    pub side: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeJson {
    pub a: usize,
    pub b: usize,
    pub faces: [usize; 2],
    pub bending: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HullH3Json {
    pub planar: bool,
    pub marked: [usize; 3],
    pub vertices: Vec<ComplexJson>,
    pub faces: Vec<FaceH3Json>,
    pub edges: Vec<EdgeJson>,
}

impl HullH3Json {
    pub fn from_hull(h: &HullComplexH3) -> Self {
        HullH3Json {
            planar: h.planar,
            marked: h.marked,
            vertices: h.vertices.iter().map(|v| ComplexJson(v.z)).collect(),
            faces: h
                .faces
                .iter()
                .map(|f| FaceH3Json { vertices: f.vertices.clone(), plane: f.plane, side: f.side.name() })
                .collect(),
            edges: h
                .edges
                .iter()
                .map(|e| EdgeJson { a: e.a, b: e.b, faces: [e.faces.0, e.faces.1], bending: Some(e.bending) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceAdsJson {
    pub vertices: Vec<usize>,
    /// Dual 4-vector (x11, x12, x21, x22).
    pub normal: [f64; 4],
    pub spacelike: bool,
    pub side: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct HullAdsJson {
    pub planar: bool,
    pub polygon: PolygonJson,
    pub faces: Vec<FaceAdsJson>,
    pub edges: Vec<EdgeJson>,
}

impl HullAdsJson {
    pub fn from_hull(h: &HullComplexAdS) -> Self {
        HullAdsJson {
            planar: h.planar,
            polygon: PolygonJson::from_polygon(&h.polygon),
            faces: h
                .faces
                .iter()
                .map(|f| FaceAdsJson {
                    vertices: f.vertices.clone(),
                    normal: f.normal.0,
                    spacelike: f.dual.is_some(),
                    side: f.side.name(),
                })
                .collect(),
            edges: h
                .edges
                .iter()
                .map(|e| EdgeJson { a: e.a, b: e.b, faces: [e.faces.0, e.faces.1], bending: e.bending })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WidthJson {
    pub lower: f64,
    pub upper: f64,
    pub argmax_faces: [usize; 2],
    pub planar: bool,
}

impl From<&WidthReport> for WidthJson {
    fn from(w: &WidthReport) -> Self {
        WidthJson { lower: w.lower, upper: w.upper, argmax_faces: w.argmax_faces, planar: w.planar }
    }
}

/// Lowercase hex SHA-256 of the bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the command, its input (keys sorted) and the effective seed
/// and tolerance.
pub fn config_hash(command: &str, input: &serde_json::Value, seed: Option<u64>, tol: Option<f64>) -> String {
    let canonical = serde_json::json!({ "command": command, "input": input, "seed": seed, "tol": tol });
    sha256_hex(canonical.to_string().as_bytes())
}

/// Real or "inf", as written in CSV cells.
pub fn real_cell(p: &CirclePoint) -> String {
    if p.is_infinity() {
        "inf".into()
    } else {
        format!("{:?}", p.to_f64())
    }
}

/// RFC 4180 table with a header row.
pub fn write_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io_err)?;
    for r in rows {
        w.write_record(r).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// (vertex_index, x_plus, x_minus) rows of a gluing map.
pub fn gluing_csv(m: &CircleMap) -> Result<String> {
    let rows: Vec<Vec<String>> =
        m.xs().iter().zip(m.ys()).enumerate().map(|(i, (x, y))| vec![i.to_string(), real_cell(x), real_cell(y)]).collect();
    write_csv(&["vertex_index", "x_plus", "x_minus"], &rows)
}
