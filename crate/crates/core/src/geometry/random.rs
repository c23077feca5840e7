//! Seeded random environment generation for tests and benchmarks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::environment::EnvironmentMap;
use super::point::Point2;
use super::polygon::Polygon;
use super::GeometryError;

/// Attempts per obstacle before giving up.
const ATTEMPTS_PER_OBSTACLE: usize = 1000;

/// Generate a deterministic random environment.
///
/// Obstacles are star-shaped polygons with 5 to 10 vertices, radii drawn
/// from `size_range = (min_diameter, max_diameter)`, rejection-sampled until
/// they satisfy the environment invariants. The same seed always produces
/// the same map.
pub fn random_environment(
    seed: u64,
    n_obstacles: usize,
    bounds: Polygon,
    size_range: (f64, f64),
) -> Result<EnvironmentMap, GeometryError> {
    let (min_d, max_d) = size_range;
    if !(min_d > 0.0) || max_d < min_d {
        return Err(GeometryError::InvalidSizeRange { min: min_d, max: max_d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = bounds.bounding_box();
    let mut obstacles: Vec<Polygon> = Vec::with_capacity(n_obstacles);
    let mut attempts_total = 0usize;

    while obstacles.len() < n_obstacles {
        let mut placed = false;
        for _ in 0..ATTEMPTS_PER_OBSTACLE {
            attempts_total += 1;
            let candidate = sample_star(&mut rng, lo, hi, min_d, max_d);
            let Ok(poly) = candidate else { continue };
            let mut trial = obstacles.clone();
            trial.push(poly);
            if let Ok(env) = EnvironmentMap::new("", bounds.clone(), trial) {
                obstacles = env.obstacles().to_vec();
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(GeometryError::PlacementFailed {
                placed: obstacles.len(),
                requested: n_obstacles,
                attempts: attempts_total,
            });
        }
    }

    EnvironmentMap::new(format!("random-{seed}-{n_obstacles}"), bounds, obstacles)
}

/// Star polygon around a random centre: strictly increasing jittered angles
/// guarantee simplicity and counterclockwise orientation.
fn sample_star(
    rng: &mut ChaCha8Rng,
    lo: Point2,
    hi: Point2,
    min_d: f64,
    max_d: f64,
) -> Result<Polygon, GeometryError> {
    let center = Point2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
    let radius = rng.gen_range(min_d..=max_d) / 2.0;
    let n: usize = rng.gen_range(5..=10);
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let jitter: f64 = rng.gen_range(-0.35..0.35);
        let angle = 2.0 * std::f64::consts::PI * (i as f64 + jitter) / n as f64;
        let r = radius * rng.gen_range(0.55..1.0);
        vertices.push(center + Point2::from_heading(angle) * r);
    }
    Polygon::new(vertices)
}
