//! Floor plans and line-of-sight obstruction counting.
//!
//! A [`FloorPlan`] is a set of wall segments and rectangular pillars, each
//! pinned to a floor index. Distances are 3D: the horizontal Euclidean
//! distance combined with `floor_height × |Δfloor|`. Obstructions are only
//! counted between points on the same floor; losses through ceilings are
//! handled by the floor attenuation factor of the path loss models.
//!
//! Intersection predicates use a fixed tolerance of [`GEOMETRIC_EPSILON`]
//! metres. A line of sight that grazes a wall endpoint, or runs along a wall,
//! counts as one crossing of that wall.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for all intersection predicates, in metres.
pub const GEOMETRIC_EPSILON: f64 = 1e-9;

/// Inter-floor height used when a plan file does not set `floor_height_m`.
pub const DEFAULT_FLOOR_HEIGHT_M: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn sub(self, other: Point2) -> Point2 {
        Point2::new(self.x - other.x, self.y - other.y)
    }

    fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// A position on a floor: planar coordinates in metres plus a floor index
/// (0 is the ground floor).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub floor: i32,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, floor: i32) -> Self {
        Self { x, y, floor }
    }

    pub fn planar(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, floor {})", self.x, self.y, self.floor)
    }
}

impl FromStr for Point3 {
    type Err = String;

    /// Parses `x,y,floor`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected `x,y,floor`, got `{s}`"));
        }
        let x: f64 = parts[0]
            .parse()
            .map_err(|_| format!("bad x coordinate `{}`", parts[0]))?;
        let y: f64 = parts[1]
            .parse()
            .map_err(|_| format!("bad y coordinate `{}`", parts[1]))?;
        let floor: i32 = parts[2]
            .parse()
            .map_err(|_| format!("bad floor index `{}`", parts[2]))?;
        if !x.is_finite() || !y.is_finite() {
            return Err(format!("coordinates must be finite, got `{s}`"));
        }
        Ok(Point3::new(x, y, floor))
    }
}

/// Obstacle material. The built-in kinds take their attenuation from the
/// wall loss table of the T-IPLM parameters; `Custom` carries its own.
#[derive(Debug, Clone)]
pub enum Material {
    Wood,
    Concrete,
    Glass,
    Pillar,
    Custom { name: String, loss_db: f64 },
}

impl Material {
    pub fn custom(name: impl Into<String>, loss_db: f64) -> Result<Self> {
        if !(loss_db.is_finite() && loss_db > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "custom material loss must be finite and positive, got {loss_db}"
            )));
        }
        Ok(Material::Custom {
            name: name.into(),
            loss_db,
        })
    }

    /// Lower-case name; built-ins use the keys of the wall loss table.
    pub fn name(&self) -> &str {
        match self {
            Material::Wood => "wood",
            Material::Concrete => "concrete",
            Material::Glass => "glass",
            Material::Pillar => "pillar",
            Material::Custom { name, .. } => name,
        }
    }

    pub fn from_builtin_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "wood" => Some(Material::Wood),
            "concrete" => Some(Material::Concrete),
            "glass" => Some(Material::Glass),
            "pillar" => Some(Material::Pillar),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Material::Wood => 0,
            Material::Concrete => 1,
            Material::Glass => 2,
            Material::Pillar => 3,
            Material::Custom { .. } => 4,
        }
    }
}

impl PartialEq for Material {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Material {}

impl PartialOrd for Material {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Material {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (
                Material::Custom {
                    name: a,
                    loss_db: la,
                },
                Material::Custom {
                    name: b,
                    loss_db: lb,
                },
            ) => a.cmp(b).then(la.total_cmp(lb)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Hash for Material {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        if let Material::Custom { name, loss_db } = self {
            name.hash(state);
            loss_db.to_bits().hash(state);
        }
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Material::Custom { name, loss_db } => write!(f, "{name}@{loss_db}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Material {
    type Err = String;

    /// Accepts a built-in name (any case) or `name@loss_db` for a custom
    /// material.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((name, loss)) = s.split_once('@') {
            let loss: f64 = loss
                .trim()
                .parse()
                .map_err(|_| format!("bad custom material loss in `{s}`"))?;
            return Material::custom(name.trim(), loss).map_err(|e| e.to_string());
        }
        Material::from_builtin_name(s).ok_or_else(|| {
            format!(
                "unknown material `{s}` (expected wood, concrete, glass, pillar or name@loss_db)"
            )
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MaterialRepr {
    Name(String),
    Custom { custom: CustomMaterialRepr },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomMaterialRepr {
    name: String,
    loss_db: f64,
}

impl Serialize for Material {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Material::Custom { name, loss_db } => MaterialRepr::Custom {
                custom: CustomMaterialRepr {
                    name: name.clone(),
                    loss_db: *loss_db,
                },
            },
            other => MaterialRepr::Name(other.name().to_owned()),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Material {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match MaterialRepr::deserialize(deserializer)? {
            MaterialRepr::Name(name) => Material::from_builtin_name(&name)
                .ok_or_else(|| D::Error::custom(format!("unknown material `{name}`"))),
            MaterialRepr::Custom { custom } => {
                Material::custom(custom.name, custom.loss_db).map_err(D::Error::custom)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallSegment {
    pub a: Point2,
    pub b: Point2,
    pub floor: i32,
    pub material: Material,
}

impl WallSegment {
    pub fn new(a: Point2, b: Point2, floor: i32, material: Material) -> Self {
        Self {
            a,
            b,
            floor,
            material,
        }
    }
}

/// Axis-aligned rectangular pillar. Counted as one [`Material::Pillar`]
/// obstruction whenever the line of sight touches it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PillarRect {
    pub center: Point2,
    pub width: f64,
    pub depth: f64,
    pub floor: i32,
}

impl PillarRect {
    pub fn new(center: Point2, width: f64, depth: f64, floor: i32) -> Self {
        Self {
            center,
            width,
            depth,
            floor,
        }
    }

    fn min(&self) -> Point2 {
        Point2::new(
            self.center.x - self.width / 2.0,
            self.center.y - self.depth / 2.0,
        )
    }

    fn max(&self) -> Point2 {
        Point2::new(
            self.center.x + self.width / 2.0,
            self.center.y + self.depth / 2.0,
        )
    }
}

/// Axis-aligned planar bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Extent {
    fn around(p: Point2) -> Self {
        Self {
            min_x: p.x,
            min_y: p.y,
            max_x: p.x,
            max_y: p.y,
        }
    }

    pub fn include(&mut self, p: Point2) {
        self.min_x = self.min_x.min(p.x);
        self.min_y = self.min_y.min(p.y);
        self.max_x = self.max_x.max(p.x);
        self.max_y = self.max_y.max(p.y);
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }
}

/// Walls, pillars and floor metadata of a building.
#[derive(Debug, Clone, PartialEq)]
pub struct FloorPlan {
    name: String,
    floor_count: i32,
    floor_height: f64,
    walls: Vec<WallSegment>,
    pillars: Vec<PillarRect>,
    extent: Option<Extent>,
}

impl FloorPlan {
    pub fn new(name: impl Into<String>, floor_count: i32) -> Result<Self> {
        if floor_count < 1 {
            return Err(Error::InvalidPlan(format!(
                "floor_count must be at least 1, got {floor_count}"
            )));
        }
        Ok(Self {
            name: name.into(),
            floor_count,
            floor_height: DEFAULT_FLOOR_HEIGHT_M,
            walls: Vec::new(),
            pillars: Vec::new(),
            extent: None,
        })
    }

    pub fn with_floor_height(mut self, floor_height: f64) -> Result<Self> {
        if !(floor_height.is_finite() && floor_height > 0.0) {
            return Err(Error::InvalidPlan(format!(
                "floor height must be positive, got {floor_height}"
            )));
        }
        self.floor_height = floor_height;
        Ok(self)
    }

    /// Fixes the planar area used for coverage grids and synthetic
    /// receiver placement. Without it, the bounding box of the geometry is
    /// used.
    pub fn with_extent(mut self, extent: Extent) -> Result<Self> {
        let finite = [extent.min_x, extent.min_y, extent.max_x, extent.max_y]
            .iter()
            .all(|v| v.is_finite());
        if !finite || extent.min_x > extent.max_x || extent.min_y > extent.max_y {
            return Err(Error::InvalidPlan(format!("malformed extent {extent:?}")));
        }
        self.extent = Some(extent);
        Ok(self)
    }

    pub fn add_wall(&mut self, wall: WallSegment) -> Result<()> {
        let finite = [wall.a.x, wall.a.y, wall.b.x, wall.b.y]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidPlan("wall endpoints must be finite".into()));
        }
        if wall.a.sub(wall.b).norm() <= GEOMETRIC_EPSILON {
            return Err(Error::InvalidPlan(format!(
                "wall endpoints coincide at ({}, {})",
                wall.a.x, wall.a.y
            )));
        }
        self.check_floor(wall.floor, "wall")?;
        self.walls.push(wall);
        Ok(())
    }

    pub fn add_pillar(&mut self, pillar: PillarRect) -> Result<()> {
        if !(pillar.center.x.is_finite() && pillar.center.y.is_finite()) {
            return Err(Error::InvalidPlan("pillar center must be finite".into()));
        }
        if !(pillar.width > 0.0 && pillar.depth > 0.0)
            || !pillar.width.is_finite()
            || !pillar.depth.is_finite()
        {
            return Err(Error::InvalidPlan(format!(
                "pillar size must be positive, got {} x {}",
                pillar.width, pillar.depth
            )));
        }
        self.check_floor(pillar.floor, "pillar")?;
        self.pillars.push(pillar);
        Ok(())
    }

    fn check_floor(&self, floor: i32, what: &str) -> Result<()> {
        if floor < 0 || floor >= self.floor_count {
            return Err(Error::InvalidPlan(format!(
                "{what} on floor {floor} outside [0, {})",
                self.floor_count
            )));
        }
        Ok(())
    }

    /// Checks that a position is finite and lies on one of the plan's floors.
    pub fn check_point(&self, p: &Point3) -> Result<()> {
        if !(p.x.is_finite() && p.y.is_finite()) {
            return Err(Error::Domain(format!("non-finite position {p}")));
        }
        if p.floor < 0 || p.floor >= self.floor_count {
            return Err(Error::Domain(format!(
                "position {p} is outside plan `{}` floors [0, {})",
                self.name, self.floor_count
            )));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn floor_count(&self) -> i32 {
        self.floor_count
    }

    pub fn floor_height(&self) -> f64 {
        self.floor_height
    }

    pub fn walls(&self) -> &[WallSegment] {
        &self.walls
    }

    pub fn pillars(&self) -> &[PillarRect] {
        &self.pillars
    }

    /// Explicit extent if set, else the bounding box of all walls and
    /// pillars. `None` for an empty plan without an explicit extent.
    pub fn extent(&self) -> Option<Extent> {
        if self.extent.is_some() {
            return self.extent;
        }
        let mut points = self
            .walls
            .iter()
            .flat_map(|w| [w.a, w.b])
            .chain(self.pillars.iter().flat_map(|p| [p.min(), p.max()]));
        let first = points.next()?;
        let mut extent = Extent::around(first);
        points.for_each(|p| extent.include(p));
        Some(extent)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PlanFile =
            serde_json::from_str(text).map_err(|e| Error::json("floor plan", e))?;
        file.into_plan()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: PlanFile = serde_json::from_str(&text)
            .map_err(|e| Error::json(format!("floor plan {}", path.display()), e))?;
        file.into_plan()
    }

    pub fn to_json(&self) -> String {
        let file = PlanFile {
            name: self.name.clone(),
            floor_count: self.floor_count,
            floor_height_m: self.floor_height,
            walls: self
                .walls
                .iter()
                .map(|w| WallRecord {
                    ax: w.a.x,
                    ay: w.a.y,
                    bx: w.b.x,
                    by: w.b.y,
                    floor: w.floor,
                    material: w.material.clone(),
                })
                .collect(),
            pillars: self
                .pillars
                .iter()
                .map(|p| PillarRecord {
                    cx: p.center.x,
                    cy: p.center.y,
                    w: p.width,
                    d: p.depth,
                    floor: p.floor,
                })
                .collect(),
            extent: self.extent,
        };
        serde_json::to_string_pretty(&file).expect("plan serialization cannot fail")
    }
}

fn default_floor_height() -> f64 {
    DEFAULT_FLOOR_HEIGHT_M
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    name: String,
    floor_count: i32,
    #[serde(default = "default_floor_height")]
    floor_height_m: f64,
    #[serde(default)]
    walls: Vec<WallRecord>,
    #[serde(default)]
    pillars: Vec<PillarRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extent: Option<Extent>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WallRecord {
    ax: f64,
    ay: f64,
    bx: f64,
    by: f64,
    floor: i32,
    material: Material,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PillarRecord {
    cx: f64,
    cy: f64,
    w: f64,
    d: f64,
    floor: i32,
}

impl PlanFile {
    fn into_plan(self) -> Result<FloorPlan> {
        let mut plan =
            FloorPlan::new(self.name, self.floor_count)?.with_floor_height(self.floor_height_m)?;
        if let Some(extent) = self.extent {
            plan = plan.with_extent(extent)?;
        }
        for (i, w) in self.walls.into_iter().enumerate() {
            plan.add_wall(WallSegment::new(
                Point2::new(w.ax, w.ay),
                Point2::new(w.bx, w.by),
                w.floor,
                w.material,
            ))
            .map_err(|e| Error::InvalidPlan(format!("walls[{i}]: {e}")))?;
        }
        for (i, p) in self.pillars.into_iter().enumerate() {
            plan.add_pillar(PillarRect::new(Point2::new(p.cx, p.cy), p.w, p.d, p.floor))
                .map_err(|e| Error::InvalidPlan(format!("pillars[{i}]: {e}")))?;
        }
        Ok(plan)
    }
}

/// Per-material obstruction counts along one line of sight.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObstructionSummary {
    counts: BTreeMap<Material, u32>,
    total: u32,
}

impl ObstructionSummary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, material: Material, count: u32) {
        if count == 0 {
            return;
        }
        *self.counts.entry(material).or_insert(0) += count;
        self.total += count;
    }

    pub fn with(mut self, material: Material, count: u32) -> Self {
        self.add(material, count);
        self
    }

    pub fn count(&self, material: &Material) -> u32 {
        self.counts.get(material).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Material, u32)> {
        self.counts.iter().map(|(m, &c)| (m, c))
    }
}

impl fmt::Display for ObstructionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        for (i, (material, count)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{material}:{count}")?;
        }
        Ok(())
    }
}

impl FromStr for ObstructionSummary {
    type Err = String;

    /// Parses `concrete:2,glass:1`. `none` or an empty string is an empty
    /// summary.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut summary = ObstructionSummary::new();
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("none") {
            return Ok(summary);
        }
        for item in s.split(',') {
            let (material, count) = item
                .rsplit_once(':')
                .ok_or_else(|| format!("expected `material:count`, got `{item}`"))?;
            let count: u32 = count
                .trim()
                .parse()
                .map_err(|_| format!("bad obstacle count in `{item}`"))?;
            summary.add(material.parse()?, count);
        }
        Ok(summary)
    }
}

/// 3D distance: horizontal Euclidean distance combined with the vertical
/// offset `floor_height × |Δfloor|`.
pub fn distance(p: &Point3, q: &Point3, plan: &FloorPlan) -> f64 {
    let dz = plan.floor_height * f64::from(q.floor - p.floor);
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Signed floor difference, positive when the receiver is above the
/// transmitter.
pub fn floor_delta(tx: &Point3, rx: &Point3) -> i32 {
    rx.floor - tx.floor
}

/// Signed distance of `c` from the directed line through `a` and `b`.
fn side(a: Point2, b: Point2, c: Point2) -> f64 {
    let ab = b.sub(a);
    ab.cross(c.sub(a)) / ab.norm()
}

fn sign(v: f64) -> i8 {
    if v > GEOMETRIC_EPSILON {
        1
    } else if v < -GEOMETRIC_EPSILON {
        -1
    } else {
        0
    }
}

fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b.sub(a);
    let t = (p.sub(a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
    let closest = Point2::new(a.x + t * ab.x, a.y + t * ab.y);
    p.sub(closest).norm()
}

/// Whether the line of sight `p → q` crosses `wall`.
///
/// Touching a wall endpoint or overlapping a wall collinearly counts as a
/// crossing. A degenerate segment (`p ≈ q`) crosses a wall only if it lies
/// on it.
pub fn segment_crosses(wall: &WallSegment, p: Point2, q: Point2) -> bool {
    let (a, b) = (wall.a, wall.b);
    if q.sub(p).norm() <= GEOMETRIC_EPSILON {
        return point_segment_distance(p, a, b) <= GEOMETRIC_EPSILON;
    }
    let sa = sign(side(p, q, a));
    let sb = sign(side(p, q, b));
    if sa == 0 && sb == 0 {
        // collinear: overlap of the projections onto pq
        let dir = q.sub(p);
        let len = dir.norm();
        let ta = a.sub(p).dot(dir) / len;
        let tb = b.sub(p).dot(dir) / len;
        let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        return hi >= -GEOMETRIC_EPSILON && lo <= len + GEOMETRIC_EPSILON;
    }
    let sp = sign(side(a, b, p));
    let sq = sign(side(a, b, q));
    sa * sb <= 0 && sp * sq <= 0
}

/// Liang-Barsky clip of `p → q` against the pillar rectangle grown by the
/// geometric epsilon.
fn segment_hits_pillar(pillar: &PillarRect, p: Point2, q: Point2) -> bool {
    let (lo, hi) = (pillar.min(), pillar.max());
    let d = q.sub(p);
    let mut t0 = 0.0_f64;
    let mut t1 = 1.0_f64;
    for (start, delta, min, max) in [(p.x, d.x, lo.x, hi.x), (p.y, d.y, lo.y, hi.y)] {
        let (min, max) = (min - GEOMETRIC_EPSILON, max + GEOMETRIC_EPSILON);
        if delta == 0.0 {
            if start < min || start > max {
                return false;
            }
            continue;
        }
        let (mut ta, mut tb) = ((min - start) / delta, (max - start) / delta);
        if ta > tb {
            std::mem::swap(&mut ta, &mut tb);
        }
        t0 = t0.max(ta);
        t1 = t1.min(tb);
        if t0 > t1 {
            return false;
        }
    }
    true
}

/// Counts walls and pillars on the shared floor of `tx` and `rx` that the
/// straight line between them crosses.
pub fn count_obstructions(
    plan: &FloorPlan,
    tx: &Point3,
    rx: &Point3,
) -> Result<ObstructionSummary> {
    if tx.floor != rx.floor {
        return Err(Error::FloorMismatch {
            tx: tx.floor,
            rx: rx.floor,
        });
    }
    let (p, q) = (tx.planar(), rx.planar());
    let mut summary = ObstructionSummary::new();
    for wall in plan.walls.iter().filter(|w| w.floor == tx.floor) {
        if segment_crosses(wall, p, q) {
            summary.add(wall.material.clone(), 1);
        }
    }
    let pillars = plan
        .pillars
        .iter()
        .filter(|pl| pl.floor == tx.floor && segment_hits_pillar(pl, p, q))
        .count();
    summary.add(Material::Pillar, pillars as u32);
    Ok(summary)
}

/// Obstructions for a link that may span floors: same-floor links count
/// walls, cross-floor links return an empty summary since their loss is
/// carried by the floor attenuation factor.
pub fn link_obstructions(plan: &FloorPlan, tx: &Point3, rx: &Point3) -> Result<ObstructionSummary> {
    if tx.floor == rx.floor {
        count_obstructions(plan, tx, rx)
    } else {
        Ok(ObstructionSummary::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wall(ax: f64, ay: f64, bx: f64, by: f64) -> WallSegment {
        WallSegment::new(
            Point2::new(ax, ay),
            Point2::new(bx, by),
            0,
            Material::Concrete,
        )
    }

    fn plan(floors: i32) -> FloorPlan {
        FloorPlan::new("test", floors).unwrap()
    }

    #[test]
    fn distance_examples() {
        let p = plan(2);
        let o = Point3::new(0.0, 0.0, 0);
        assert_eq!(distance(&o, &o, &p), 0.0);
        assert_eq!(distance(&o, &Point3::new(3.0, 4.0, 0), &p), 5.0);
        assert_eq!(distance(&o, &Point3::new(0.0, 0.0, 1), &p), 3.0);
    }

    #[test]
    fn crossing_examples() {
        let w = wall(0.0, -1.0, 0.0, 1.0);
        assert!(segment_crosses(
            &w,
            Point2::new(-1.0, 0.0),
            Point2::new(1.0, 0.0)
        ));
        assert!(!segment_crosses(
            &w,
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0)
        ));
        let w = wall(0.0, 0.0, 0.0, 1.0);
        assert!(!segment_crosses(
            &w,
            Point2::new(0.0, 2.0),
            Point2::new(0.0, 3.0)
        ));
    }

    #[test]
    fn tangent_configurations_count_once() {
        let w = wall(0.0, 0.0, 0.0, 1.0);
        // through the endpoint
        assert!(segment_crosses(
            &w,
            Point2::new(-1.0, 0.0),
            Point2::new(1.0, 0.0)
        ));
        // collinear overlap
        assert!(segment_crosses(
            &w,
            Point2::new(0.0, 0.5),
            Point2::new(0.0, 3.0)
        ));
        // collinear, touching at one end
        assert!(segment_crosses(
            &w,
            Point2::new(0.0, 1.0),
            Point2::new(0.0, 3.0)
        ));
        // receiver standing on the wall
        assert!(segment_crosses(
            &w,
            Point2::new(-2.0, 0.5),
            Point2::new(0.0, 0.5)
        ));
        // stopping just short
        assert!(!segment_crosses(
            &w,
            Point2::new(-2.0, 0.5),
            Point2::new(-1e-6, 0.5)
        ));
    }

    #[test]
    fn degenerate_line_of_sight() {
        let w = wall(0.0, 0.0, 0.0, 1.0);
        assert!(segment_crosses(
            &w,
            Point2::new(0.0, 0.5),
            Point2::new(0.0, 0.5)
        ));
        assert!(!segment_crosses(
            &w,
            Point2::new(1.0, 0.5),
            Point2::new(1.0, 0.5)
        ));
    }

    #[test]
    fn counts_by_material() {
        let mut p = plan(1);
        assert_eq!(
            count_obstructions(&p, &Point3::new(0.0, 0.0, 0), &Point3::new(5.0, 0.0, 0))
                .unwrap()
                .total(),
            0
        );
        p.add_wall(wall(2.0, -1.0, 2.0, 1.0)).unwrap();
        let s =
            count_obstructions(&p, &Point3::new(0.0, 0.0, 0), &Point3::new(5.0, 0.0, 0)).unwrap();
        assert_eq!(s.count(&Material::Concrete), 1);
        assert_eq!(s.total(), 1);

        p.add_wall(WallSegment::new(
            Point2::new(3.0, -1.0),
            Point2::new(3.0, 1.0),
            0,
            Material::Glass,
        ))
        .unwrap();
        p.add_pillar(PillarRect::new(Point2::new(4.0, 0.0), 0.6, 0.6, 0))
            .unwrap();
        let s =
            count_obstructions(&p, &Point3::new(0.0, 0.0, 0), &Point3::new(5.0, 0.0, 0)).unwrap();
        assert_eq!(s.to_string(), "concrete:1,glass:1,pillar:1");
        assert_eq!(s.total(), 3);
    }

    #[test]
    fn pillar_counts_once_and_grazing_counts() {
        let mut p = plan(1);
        p.add_pillar(PillarRect::new(Point2::new(0.0, 0.0), 0.6, 0.6, 0))
            .unwrap();
        let through =
            count_obstructions(&p, &Point3::new(-2.0, 0.0, 0), &Point3::new(2.0, 0.0, 0)).unwrap();
        assert_eq!(through.count(&Material::Pillar), 1);
        let graze =
            count_obstructions(&p, &Point3::new(-2.0, 0.3, 0), &Point3::new(2.0, 0.3, 0)).unwrap();
        assert_eq!(graze.count(&Material::Pillar), 1);
        let miss = count_obstructions(&p, &Point3::new(-2.0, 0.31, 0), &Point3::new(2.0, 0.31, 0))
            .unwrap();
        assert_eq!(miss.total(), 0);
        let inside =
            count_obstructions(&p, &Point3::new(0.0, 0.0, 0), &Point3::new(0.1, 0.1, 0)).unwrap();
        assert_eq!(inside.total(), 1);
    }

    #[test]
    fn other_floors_are_ignored_and_cross_floor_is_refused() {
        let mut p = plan(2);
        p.add_wall(WallSegment::new(
            Point2::new(1.0, -1.0),
            Point2::new(1.0, 1.0),
            1,
            Material::Wood,
        ))
        .unwrap();
        let s =
            count_obstructions(&p, &Point3::new(0.0, 0.0, 0), &Point3::new(2.0, 0.0, 0)).unwrap();
        assert_eq!(s.total(), 0);
        let err = count_obstructions(&p, &Point3::new(0.0, 0.0, 0), &Point3::new(2.0, 0.0, 1));
        assert!(matches!(err, Err(Error::FloorMismatch { tx: 0, rx: 1 })));
        let s =
            link_obstructions(&p, &Point3::new(0.0, 0.0, 0), &Point3::new(2.0, 0.0, 1)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn floor_delta_examples() {
        let g = Point3::new(0.0, 0.0, 0);
        let second = Point3::new(0.0, 0.0, 2);
        assert_eq!(floor_delta(&g, &g), 0);
        assert_eq!(floor_delta(&g, &second), 2);
        assert_eq!(floor_delta(&second, &g), -2);
    }

    #[test]
    fn plan_validation() {
        assert!(FloorPlan::new("x", 0).is_err());
        let mut p = plan(3);
        assert!(p.add_wall(wall(1.0, 1.0, 1.0, 1.0)).is_err());
        assert!(p
            .add_wall(WallSegment::new(
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                3,
                Material::Wood
            ))
            .is_err());
        assert!(p
            .add_pillar(PillarRect::new(Point2::new(0.0, 0.0), 0.0, 1.0, 0))
            .is_err());
        assert!(Material::custom("foam", 0.0).is_err());
        assert!(Material::custom("foam", f64::NAN).is_err());
    }

    #[test]
    fn plan_file_round_trip() {
        let text = r#"{
            "name": "office",
            "floor_count": 3,
            "walls": [
                {"ax": 0, "ay": 0, "bx": 10, "by": 0, "floor": 0, "material": "Concrete"},
                {"ax": 0, "ay": 5, "bx": 10, "by": 5, "floor": 1, "material": "GLASS"},
                {"ax": 5, "ay": 0, "bx": 5, "by": 5, "floor": 2,
                 "material": {"custom": {"name": "brick", "loss_db": 7.5}}}
            ],
            "pillars": [{"cx": 2, "cy": 2, "w": 0.6, "d": 0.6, "floor": 0}]
        }"#;
        let plan = FloorPlan::from_json(text).unwrap();
        assert_eq!(plan.floor_height(), DEFAULT_FLOOR_HEIGHT_M);
        assert_eq!(plan.walls()[1].material, Material::Glass);
        assert_eq!(
            plan.walls()[2].material,
            Material::custom("brick", 7.5).unwrap()
        );
        let extent = plan.extent().unwrap();
        assert_eq!((extent.min_x, extent.max_x, extent.max_y), (0.0, 10.0, 5.0));
        assert_eq!(FloorPlan::from_json(&plan.to_json()).unwrap(), plan);
    }

    #[test]
    fn plan_file_errors() {
        let bad_material = r#"{"name": "x", "floor_count": 1,
            "walls": [{"ax": 0, "ay": 0, "bx": 1, "by": 0, "floor": 0, "material": "steel"}]}"#;
        assert!(FloorPlan::from_json(bad_material).is_err());
        let bad_floor = r#"{"name": "x", "floor_count": 1,
            "walls": [{"ax": 0, "ay": 0, "bx": 1, "by": 0, "floor": 1, "material": "wood"}]}"#;
        let err = FloorPlan::from_json(bad_floor).unwrap_err().to_string();
        assert!(err.contains("walls[0]"), "{err}");
    }

    #[test]
    fn summary_text_round_trip() {
        let s: ObstructionSummary = "concrete:2,Glass:1".parse().unwrap();
        assert_eq!(s.count(&Material::Concrete), 2);
        assert_eq!(s.total(), 3);
        assert_eq!(s.to_string(), "concrete:2,glass:1");
        assert_eq!("none".parse::<ObstructionSummary>().unwrap().total(), 0);
        let c: ObstructionSummary = "brick@7.5:1".parse().unwrap();
        assert_eq!(c.to_string().parse::<ObstructionSummary>().unwrap(), c);
        assert!("steel:1".parse::<ObstructionSummary>().is_err());
    }
}
