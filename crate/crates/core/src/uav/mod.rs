//! UAV 3-D path planning over terrain with vertical cylindrical obstacles.
//!
//! A path of `n` track points runs from a fixed start to a fixed goal. The
//! decision vector holds the `n - 2` interior points as absolute `(x, y, z)`
//! triples. The cost is `w1 * F1 + w2 * F2 + w3 * F3`:
//!
//! - `F1`: total Euclidean length.
//! - `F2`: obstacle cost per segment and cylinder. It is 0 beyond the safety
//!   annulus, grows linearly inside it, and is [`BIG`] on collision. The
//!   distance is measured between the segment's ground projection and the
//!   cylinder axis.
//! - `F3`: per-point distance of the above-ground altitude from the centre
//!   of the `[h_min, h_max]` band, or [`BIG`] outside the band.

mod geometry;
mod render;
mod terrain;

use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Fitness, Problem};
use crate::space::SearchSpace;

pub use geometry::{distance3, point_segment_distance, Point3};
pub use render::{path_csv, path_svg};
pub use terrain::{Bump, Terrain, TerrainSpec};

/// Finite stand-in for an infinite penalty.
pub const BIG: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Serializable scenario description, the on-disk form of [`Scenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub waypoints: usize,
    pub safety_width: f64,
    /// `[h_min, h_max]` above ground, meters.
    pub height_band: [f64; 2],
    /// `[w1, w2, w3]` for length, obstacle and height cost.
    pub weights: [f64; 3],
    pub start: Point3,
    pub goal: Point3,
    pub terrain: TerrainSpec,
    pub obstacles: Vec<Obstacle>,
    /// Lateral half-width of the search box around the start-goal chord,
    /// meters. The whole terrain when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corridor_half_width: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    config: ScenarioConfig,
    terrain: Terrain,
}

/// Track points from start to goal.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub points: Vec<Point3>,
}

/// Per-term breakdown of [`Scenario::total_cost`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub length: f64,
    pub obstacle: f64,
    pub height: f64,
    pub total: f64,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        let terrain = config.terrain.build()?;
        validate(&config, &terrain)?;
        Ok(Self { config, terrain })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::parse(text, None)
    }

    pub fn load(path: &FsPath) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, Some(path))
    }

    fn parse(text: &str, path: Option<&FsPath>) -> Result<Self> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = match e.span() {
                Some(span) => {
                    let before = &text[..span.start.min(text.len())];
                    let line = before.matches('\n').count() + 1;
                    let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
                    (Some(line), Some(column))
                }
                None => (None, None),
            };
            Error::ingestion(path, line, column, e.message().to_string())
        })?;
        Self::new(config).map_err(|e| match e {
            Error::Config(msg) => Error::ingestion(path, None, None, msg),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(&self.config).expect("scenario config serializes")
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn name(&self) -> &str {
        &self.config.name
    }

    pub fn terrain(&self) -> &Terrain {
        &self.terrain
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.config.obstacles
    }

    pub fn waypoints(&self) -> usize {
        self.config.waypoints
    }

    pub fn weights(&self) -> [f64; 3] {
        self.config.weights
    }

    /// Number of decision variables, `3 (n - 2)`.
    pub fn dim(&self) -> usize {
        3 * (self.config.waypoints - 2)
    }

    /// Straight-line distance from start to goal.
    pub fn chord_length(&self) -> f64 {
        distance3(&self.config.start, &self.config.goal)
    }

    /// Box for the decision vector.
    ///
    /// Along the dominant horizontal axis of the start-goal chord, point `j`
    /// is confined to its own slot of width `chord / (n - 1)`, so points stay
    /// ordered from start to goal. The other horizontal axis spans the
    /// terrain, narrowed to the corridor when one is configured. Altitude spans the absolute heights that are inside the band
    /// over every cell of the terrain when that range is non-empty.
    pub fn search_space(&self) -> SearchSpace {
        let c = &self.config;
        let [xmin, ymin, xmax, ymax] = self.terrain.extent();
        let along = if (c.goal[0] - c.start[0]).abs() >= (c.goal[1] - c.start[1]).abs() {
            0
        } else {
            1
        };
        let (mut lat_lo, mut lat_hi) = if along == 0 { (ymin, ymax) } else { (xmin, xmax) };
        if let Some(half) = c.corridor_half_width {
            let lat = 1 - along;
            let (a, b) = (c.start[lat].min(c.goal[lat]), c.start[lat].max(c.goal[lat]));
            lat_lo = lat_lo.max(a - half);
            lat_hi = lat_hi.min(b + half);
        }
        let [h_min, h_max] = c.height_band;
        let (tmin, tmax) = (self.terrain.min_height(), self.terrain.max_height());
        let (z_lo, z_hi) = if tmax + h_min < tmin + h_max {
            (tmax + h_min, tmin + h_max)
        } else {
            (tmin + h_min, tmax + h_max)
        };
        let segments = (c.waypoints - 1) as f64;
        let (a0, a1) = (c.start[along], c.goal[along]);
        let mut lower = Vec::with_capacity(self.dim());
        let mut upper = Vec::with_capacity(self.dim());
        for j in 1..c.waypoints - 1 {
            let lo = a0 + (a1 - a0) * (j as f64 - 0.5) / segments;
            let hi = a0 + (a1 - a0) * (j as f64 + 0.5) / segments;
            let (slot_lo, slot_hi) = (lo.min(hi), lo.max(hi));
            let (x, y) = if along == 0 {
                ((slot_lo, slot_hi), (lat_lo, lat_hi))
            } else {
                ((lat_lo, lat_hi), (slot_lo, slot_hi))
            };
            lower.extend([x.0, y.0, z_lo]);
            upper.extend([x.1, y.1, z_hi]);
        }
        SearchSpace::new(lower, upper).expect("scenario bounds are non-degenerate")
    }

    /// Reshapes the decision vector into a path with fixed endpoints.
    pub fn decode(&self, x: &[f64]) -> Result<Path> {
        if x.len() != self.dim() {
            return Err(Error::config(format!(
                "path vector has length {}, expected 3 * ({} - 2) = {}",
                x.len(),
                self.config.waypoints,
                self.dim()
            )));
        }
        let mut points = Vec::with_capacity(self.config.waypoints);
        points.push(self.config.start);
        points.extend(x.chunks_exact(3).map(|c| [c[0], c[1], c[2]]));
        points.push(self.config.goal);
        Ok(Path { points })
    }

    /// Inverse of [`Scenario::decode`].
    pub fn encode(path: &Path) -> Vec<f64> {
        let n = path.points.len();
        if n < 3 {
            return Vec::new();
        }
        path.points[1..n - 1]
            .iter()
            .flat_map(|p| p.iter().copied())
            .collect()
    }

    /// Minimum ground-plane distance from each obstacle axis to the path.
    pub fn clearances(&self, path: &Path) -> Vec<f64> {
        self.config
            .obstacles
            .iter()
            .map(|o| {
                path.points
                    .windows(2)
                    .map(|w| point_segment_distance(o.center, [w[0][0], w[0][1]], [w[1][0], w[1][1]]))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    pub fn is_collision_free(&self, path: &Path) -> bool {
        self.clearances(path)
            .iter()
            .zip(&self.config.obstacles)
            .all(|(d, o)| *d > o.radius)
    }

    /// Above-ground altitude of each track point; `None` off the terrain.
    pub fn relative_heights(&self, path: &Path) -> Vec<Option<f64>> {
        path.points
            .iter()
            .map(|p| self.terrain.height_at(p[0], p[1]).map(|g| p[2] - g))
            .collect()
    }

    pub fn within_height_band(&self, path: &Path) -> bool {
        let [lo, hi] = self.config.height_band;
        self.relative_heights(path)
            .iter()
            .all(|h| matches!(h, Some(h) if (lo..=hi).contains(h)))
    }

    pub fn obstacle_cost(&self, path: &Path) -> f64 {
        let s = self.config.safety_width;
        let mut cost = 0.0;
        for w in path.points.windows(2) {
            let (a, b) = ([w[0][0], w[0][1]], [w[1][0], w[1][1]]);
            for o in &self.config.obstacles {
                let d = point_segment_distance(o.center, a, b);
                cost += if d > s + o.radius {
                    0.0
                } else if d > o.radius {
                    s + o.radius - d
                } else {
                    BIG
                };
            }
        }
        cost
    }

    pub fn height_cost(&self, path: &Path) -> f64 {
        let [lo, hi] = self.config.height_band;
        let mid = 0.5 * (lo + hi);
        self.relative_heights(path)
            .into_iter()
            .map(|h| match h {
                Some(h) if (lo..=hi).contains(&h) => (h - mid).abs(),
                _ => BIG,
            })
            .sum()
    }

    pub fn breakdown(&self, path: &Path) -> CostBreakdown {
        let [w1, w2, w3] = self.config.weights;
        let length = length_cost(path);
        let obstacle = self.obstacle_cost(path);
        let height = self.height_cost(path);
        CostBreakdown {
            length,
            obstacle,
            height,
            total: w1 * length + w2 * obstacle + w3 * height,
        }
    }

    pub fn total_cost(&self, x: &[f64]) -> Result<f64> {
        Ok(self.breakdown(&self.decode(x)?).total)
    }

    /// True when the straight start-goal chord collides with an obstacle.
    pub fn chord_blocked(&self) -> bool {
        let straight = Path {
            points: vec![self.config.start, self.config.goal],
        };
        !self.is_collision_free(&straight)
    }
}

/// Sum of segment lengths.
pub fn length_cost(path: &Path) -> f64 {
    path.points.windows(2).map(|w| distance3(&w[0], &w[1])).sum()
}

impl Problem for Scenario {
    fn dim(&self) -> usize {
        Scenario::dim(self)
    }

    fn evaluate(&self, x: &[f64]) -> Fitness {
        Fitness::unconstrained(self.total_cost(x).unwrap_or(f64::INFINITY))
    }

    fn name(&self) -> &str {
        &self.config.name
    }
}

fn validate(c: &ScenarioConfig, terrain: &Terrain) -> Result<()> {
    if c.waypoints < 3 {
        return Err(Error::config(format!(
            "a path needs at least 3 track points, got {}",
            c.waypoints
        )));
    }
    if !(c.safety_width >= 0.0) {
        return Err(Error::config("safety width must be non-negative"));
    }
    let [lo, hi] = c.height_band;
    if !(lo < hi) {
        return Err(Error::config(format!("height band [{lo}, {hi}] is empty")));
    }
    if c.weights.iter().any(|w| !(*w >= 0.0)) || (c.weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::config(format!(
            "weights {:?} must be non-negative and sum to 1",
            c.weights
        )));
    }
    if let Some(o) = c.obstacles.iter().find(|o| !(o.radius > 0.0)) {
        return Err(Error::config(format!("obstacle radius must be positive, got {}", o.radius)));
    }
    for (label, p) in [("start", c.start), ("goal", c.goal)] {
        if terrain.height_at(p[0], p[1]).is_none() {
            return Err(Error::config(format!("{label} {p:?} lies outside the terrain")));
        }
    }
    if let Some(half) = c.corridor_half_width {
        if !(half > 0.0) {
            return Err(Error::config("corridor half-width must be positive"));
        }
    }
    if c.start[0] == c.goal[0] && c.start[1] == c.goal[1] {
        return Err(Error::config("start and goal must differ horizontally"));
    }
    Ok(())
}

fn rolling_terrain(bumps: &[(f64, f64, f64, f64)]) -> TerrainSpec {
    TerrainSpec {
        width: 1000.0,
        depth: 1000.0,
        cell_size: 10.0,
        base: 0.0,
        bumps: bumps
            .iter()
            .map(|&(x, y, height, spread)| Bump {
                x,
                y,
                height,
                spread,
            })
            .collect(),
    }
}

fn endpoint(terrain: &TerrainSpec, x: f64, y: f64, band: [f64; 2]) -> Point3 {
    let t = terrain.build().expect("static terrain is valid");
    let g = t.height_at(x, y).expect("endpoint inside the map");
    [x, y, g + 0.5 * (band[0] + band[1])]
}

fn builtin(name: &str, corridor: f64, bumps: &[(f64, f64, f64, f64)], obstacles: &[(f64, f64, f64)]) -> ScenarioConfig {
    let band = [20.0, 120.0];
    let terrain = rolling_terrain(bumps);
    ScenarioConfig {
        name: name.to_string(),
        waypoints: 50,
        safety_width: 20.0,
        height_band: band,
        weights: [0.5, 0.3, 0.2],
        start: endpoint(&terrain, 50.0, 500.0, band),
        goal: endpoint(&terrain, 950.0, 500.0, band),
        terrain,
        obstacles: obstacles
            .iter()
            .map(|&(x, y, r)| Obstacle {
                center: [x, y],
                radius: r,
            })
            .collect(),
        corridor_half_width: Some(corridor),
    }
}

const CORRIDOR: f64 = 250.0;

/// Dense (seven obstacles) and sparse (four obstacles) scenarios on a
/// 1 km x 1 km map of rolling hills.
pub fn build_scenarios() -> (Scenario, Scenario) {
    let hills = [
        (150.0, 800.0, 35.0, 120.0),
        (420.0, 250.0, 28.0, 150.0),
        (620.0, 700.0, 40.0, 110.0),
        (880.0, 300.0, 25.0, 130.0),
        (500.0, 500.0, 15.0, 200.0),
    ];
    let dense = builtin(
        "dense",
        CORRIDOR,
        &hills,
        &[
            (200.0, 480.0, 60.0),
            (330.0, 610.0, 60.0),
            (400.0, 380.0, 55.0),
            (540.0, 540.0, 70.0),
            (660.0, 390.0, 60.0),
            (760.0, 600.0, 60.0),
            (850.0, 470.0, 45.0),
        ],
    );
    let sparse = builtin(
        "sparse",
        CORRIDOR,
        &hills,
        &[
            (300.0, 520.0, 80.0),
            (480.0, 360.0, 70.0),
            (640.0, 560.0, 90.0),
            (810.0, 430.0, 60.0),
        ],
    );
    let one = Scenario::new(dense).expect("built-in scenario is valid");
    let two = Scenario::new(sparse).expect("built-in scenario is valid");
    assert!(one.chord_blocked() && two.chord_blocked());
    (one, two)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(obstacles: Vec<Obstacle>, waypoints: usize, weights: [f64; 3]) -> Scenario {
        Scenario::new(ScenarioConfig {
            name: "flat".into(),
            waypoints,
            safety_width: 10.0,
            height_band: [20.0, 120.0],
            weights,
            start: [0.0, 50.0, 70.0],
            goal: [100.0, 50.0, 70.0],
            terrain: TerrainSpec {
                width: 100.0,
                depth: 100.0,
                cell_size: 10.0,
                base: 0.0,
                bumps: vec![],
            },
            obstacles,
            corridor_half_width: None,
        })
        .unwrap()
    }

    #[test]
    fn decode_shapes() {
        let s = flat(vec![], 3, [1.0, 0.0, 0.0]);
        let p = s.decode(&[50.0, 60.0, 70.0]).unwrap();
        assert_eq!(p.points, vec![[0.0, 50.0, 70.0], [50.0, 60.0, 70.0], [100.0, 50.0, 70.0]]);
        assert!(s.decode(&[1.0, 2.0]).is_err());

        let (one, _) = build_scenarios();
        assert_eq!(one.dim(), 144);
    }

    #[test]
    fn encode_inverts_decode() {
        let s = flat(vec![], 5, [1.0, 0.0, 0.0]);
        let x: Vec<f64> = (0..9).map(|i| 10.0 + i as f64).collect();
        assert_eq!(Scenario::encode(&s.decode(&x).unwrap()), x);
    }

    #[test]
    fn reversal_preserves_length_and_clearance() {
        let s = flat(vec![Obstacle { center: [50.0, 20.0], radius: 5.0 }], 4, [1.0, 0.0, 0.0]);
        let p = s.decode(&[30.0, 70.0, 60.0, 70.0, 30.0, 80.0]).unwrap();
        let mut rev = p.clone();
        rev.points.reverse();
        assert!((length_cost(&p) - length_cost(&rev)).abs() < 1e-12);
        assert_eq!(s.clearances(&p), s.clearances(&rev));
    }

    #[test]
    fn single_obstacle_detour() {
        // Obstacle on the chord: the straight path collides, a path bent
        // through (50, 100) clears R + S and pays only extra length.
        let s = flat(vec![Obstacle { center: [50.0, 50.0], radius: 10.0 }], 3, [0.5, 0.5, 0.0]);
        let straight = s.decode(&[50.0, 50.0, 70.0]).unwrap();
        assert!(!s.is_collision_free(&straight));
        let bent = s.decode(&[50.0, 100.0, 70.0]).unwrap();
        let d = s.clearances(&bent)[0];
        // distance from (50,50) to the segment (0,50)-(50,100) is 50/sqrt(2)
        assert!((d - 50.0 / 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(s.obstacle_cost(&bent), 0.0);
        assert!((length_cost(&bent) - 100.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn cost_decreases_with_clearance() {
        let s = flat(vec![Obstacle { center: [50.0, 50.0], radius: 5.0 }], 3, [0.0, 1.0, 0.0]);
        let mut last = f64::INFINITY;
        for k in 0..40 {
            let y = 50.0 + 5.5 + k as f64;
            let c = s.obstacle_cost(&s.decode(&[50.0, y, 70.0]).unwrap());
            assert!(c <= last);
            last = c;
        }
        assert_eq!(last, 0.0);
    }

    #[test]
    fn two_waypoints_rejected() {
        let mut c = flat(vec![], 3, [1.0, 0.0, 0.0]).config().clone();
        c.waypoints = 2;
        assert!(matches!(Scenario::new(c), Err(Error::Config(_))));
    }

    #[test]
    fn length_examples() {
        let p = Path {
            points: vec![[0.0, 0.0, 0.0], [3.0, 4.0, 0.0]],
        };
        assert_eq!(length_cost(&p), 5.0);
        let dup = Path {
            points: vec![[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [3.0, 4.0, 0.0]],
        };
        assert_eq!(length_cost(&dup), 5.0);
        let collinear = Path {
            points: vec![[0.0, 0.0, 0.0], [1.5, 2.0, 0.0], [3.0, 4.0, 0.0]],
        };
        assert!((length_cost(&collinear) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn obstacle_branches() {
        let ob = |y: f64| Obstacle {
            center: [50.0, y],
            radius: 5.0,
        };
        let straight = |s: &Scenario| s.decode(&[50.0, 50.0, 70.0]).unwrap();
        // clearance S + R + 1
        let s = flat(vec![ob(50.0 + 16.0)], 3, [1.0, 0.0, 0.0]);
        assert_eq!(s.obstacle_cost(&straight(&s)), 0.0);
        // clearance R + S/2: each of the two segments contributes S/2
        let s = flat(vec![ob(50.0 + 10.0)], 3, [1.0, 0.0, 0.0]);
        assert!((s.obstacle_cost(&straight(&s)) - 2.0 * 5.0).abs() < 1e-12);
        // through the centre
        let s = flat(vec![ob(50.0)], 3, [1.0, 0.0, 0.0]);
        assert!(s.obstacle_cost(&straight(&s)) >= BIG);
        assert!(!s.is_collision_free(&straight(&s)));
    }

    #[test]
    fn height_branches() {
        let s = flat(vec![], 3, [1.0, 0.0, 0.0]);
        assert_eq!(s.height_cost(&s.decode(&[50.0, 50.0, 70.0]).unwrap()), 0.0);
        assert_eq!(s.height_cost(&s.decode(&[50.0, 50.0, 20.0]).unwrap()), 50.0);
        assert!(s.height_cost(&s.decode(&[50.0, 50.0, -1.0]).unwrap()) >= BIG);
        // off the map
        assert!(s.height_cost(&s.decode(&[500.0, 50.0, 70.0]).unwrap()) >= BIG);
    }

    #[test]
    fn weights_select_terms() {
        let s = flat(vec![], 3, [1.0, 0.0, 0.0]);
        let x = [40.0, 55.0, 30.0];
        let p = s.decode(&x).unwrap();
        assert_eq!(s.total_cost(&x).unwrap(), length_cost(&p));

        let s = flat(vec![], 3, [0.5, 0.3, 0.2]);
        assert!((s.total_cost(&[50.0, 50.0, 70.0]).unwrap() - 0.5 * 100.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_weights_and_band() {
        let mut c = flat(vec![], 3, [1.0, 0.0, 0.0]).config().clone();
        c.weights = [0.5, 0.5, 0.5];
        assert!(Scenario::new(c.clone()).is_err());
        c.weights = [1.0, 0.0, 0.0];
        c.height_band = [50.0, 50.0];
        assert!(Scenario::new(c).is_err());
    }

    #[test]
    fn builtin_scenarios() {
        let (one, two) = build_scenarios();
        assert_eq!(one.obstacles().len(), 7);
        assert_eq!(two.obstacles().len(), 4);
        assert!(one.chord_blocked() && two.chord_blocked());
        for s in [&one, &two] {
            let space = s.search_space();
            assert_eq!(space.dim(), 144);
            // every box point is in band
            let [lo, hi] = s.config().height_band;
            assert!(space.lower()[2] >= s.terrain().max_height() + lo - 1e-9);
            assert!(space.upper()[2] <= s.terrain().min_height() + hi + 1e-9);
        }
    }

    #[test]
    fn toml_round_trip_and_errors() {
        let (one, _) = build_scenarios();
        let text = one.to_toml();
        let back = Scenario::from_toml_str(&text).unwrap();
        assert_eq!(back.config(), one.config());

        let err = Scenario::from_toml_str("name = \"x\"\nwaypoints = \"many\"\n").unwrap_err();
        match err {
            Error::Ingestion { line, .. } => assert_eq!(line, Some(2)),
            e => panic!("unexpected {e}"),
        }
        let mut bad = one.config().clone();
        bad.waypoints = 1;
        let err = Scenario::from_toml_str(&toml::to_string(&bad).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Ingestion { .. }));
    }
}
