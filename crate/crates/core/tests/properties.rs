use proptest::prelude::*;

use tiplm::calibrate::{self, error_stats, mse, Weighting};
use tiplm::coverage::{coverage_grid, coverage_grid_sequential};
use tiplm::geometry::{
    count_obstructions, distance, FloorPlan, Material, ObstructionSummary, PillarRect, Point2,
    Point3, WallSegment,
};
use tiplm::ingest::{aggregate, Measurement, MeasurementSet};
use tiplm::models::{
    self, channel_to_frequency, Channel, LinkBudget, LinkContext, ModelParams, PathLossModel,
    Scenario, TIplmParams,
};
use tiplm::synth::{self, SynthConfig};

fn material() -> impl Strategy<Value = Material> {
    prop_oneof![
        Just(Material::Wood),
        Just(Material::Concrete),
        Just(Material::Glass),
        (0.5..8.0f64).prop_map(|l| Material::custom("partition", l).unwrap()),
    ]
}

fn coord() -> impl Strategy<Value = f64> {
    0.0..20.0f64
}

fn point() -> impl Strategy<Value = Point2> {
    (coord(), coord()).prop_map(|(x, y)| Point2::new(x, y))
}

fn wall() -> impl Strategy<Value = WallSegment> {
    (point(), point(), material())
        .prop_filter("non-degenerate wall", |(a, b, _)| {
            (a.x - b.x).hypot(a.y - b.y) > 0.1
        })
        .prop_map(|(a, b, m)| WallSegment::new(a, b, 0, m))
}

fn pillar() -> impl Strategy<Value = PillarRect> {
    (point(), 0.2..2.0f64, 0.2..2.0f64).prop_map(|(c, w, d)| PillarRect::new(c, w, d, 0))
}

fn plan_from(walls: &[WallSegment], pillars: &[PillarRect]) -> FloorPlan {
    let mut plan = FloorPlan::new("prop", 1).unwrap();
    for w in walls {
        plan.add_wall(w.clone()).unwrap();
    }
    for p in pillars {
        plan.add_pillar(*p).unwrap();
    }
    plan
}

fn plan() -> impl Strategy<Value = FloorPlan> {
    (
        prop::collection::vec(wall(), 0..8),
        prop::collection::vec(pillar(), 0..3),
    )
        .prop_map(|(w, p)| plan_from(&w, &p))
}

fn on_floor(p: Point2) -> Point3 {
    Point3::new(p.x, p.y, 0)
}

fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (a.x + t * dx - p.x).hypot(a.y + t * dy - p.y)
}

/// Keeps links clear of wall endpoints and pillar corners so rounding
/// after a rigid motion cannot flip a count.
fn well_separated(plan: &FloorPlan, p: Point2, q: Point2) -> bool {
    const MARGIN: f64 = 1e-6;
    let near = |x: Point2| point_segment_distance(x, p, q) < MARGIN;
    let touches = |a: Point2, b: Point2| {
        point_segment_distance(p, a, b) < MARGIN || point_segment_distance(q, a, b) < MARGIN
    };
    plan.walls()
        .iter()
        .all(|w| !near(w.a) && !near(w.b) && !touches(w.a, w.b))
        && plan.pillars().iter().all(|r| {
            let (hw, hd) = (r.width / 2.0, r.depth / 2.0);
            let c = r.center;
            let cs = [
                Point2::new(c.x - hw, c.y - hd),
                Point2::new(c.x + hw, c.y - hd),
                Point2::new(c.x + hw, c.y + hd),
                Point2::new(c.x - hw, c.y + hd),
            ];
            cs.iter().all(|&x| !near(x)) && (0..4).all(|i| !touches(cs[i], cs[(i + 1) % 4]))
        })
}

fn rotate_translate(p: Point2, angle: f64, shift: Point2) -> Point2 {
    let (s, c) = angle.sin_cos();
    Point2::new(c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y)
}

proptest! {
    #[test]
    fn obstruction_count_is_symmetric(plan in plan(), p in point(), q in point()) {
        let ab = count_obstructions(&plan, &on_floor(p), &on_floor(q)).unwrap();
        let ba = count_obstructions(&plan, &on_floor(q), &on_floor(p)).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn adding_a_wall_never_lowers_counts(
        walls in prop::collection::vec(wall(), 0..8),
        extra in wall(),
        p in point(),
        q in point(),
    ) {
        let before = count_obstructions(&plan_from(&walls, &[]), &on_floor(p), &on_floor(q)).unwrap();
        let mut more = walls.clone();
        more.push(extra);
        let after = count_obstructions(&plan_from(&more, &[]), &on_floor(p), &on_floor(q)).unwrap();
        for (m, k) in before.iter() {
            prop_assert!(after.count(m) >= k);
        }
        prop_assert!(after.total() >= before.total());
    }

    #[test]
    fn obstruction_count_survives_rigid_motion(
        walls in prop::collection::vec(wall(), 0..8),
        p in point(),
        q in point(),
        angle in 0.0..std::f64::consts::TAU,
        shift in (-50.0..50.0f64, -50.0..50.0f64),
    ) {
        let plan = plan_from(&walls, &[]);
        prop_assume!(well_separated(&plan, p, q));
        let shift = Point2::new(shift.0, shift.1);
        let moved: Vec<WallSegment> = walls
            .iter()
            .map(|w| WallSegment::new(
                rotate_translate(w.a, angle, shift),
                rotate_translate(w.b, angle, shift),
                0,
                w.material.clone(),
            ))
            .collect();
        let before = count_obstructions(&plan, &on_floor(p), &on_floor(q)).unwrap();
        let after = count_obstructions(
            &plan_from(&moved, &[]),
            &on_floor(rotate_translate(p, angle, shift)),
            &on_floor(rotate_translate(q, angle, shift)),
        )
        .unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn pillar_counts_survive_translation(
        pillars in prop::collection::vec(pillar(), 1..4),
        p in point(),
        q in point(),
        shift in (-50.0..50.0f64, -50.0..50.0f64),
    ) {
        let plan = plan_from(&[], &pillars);
        prop_assume!(well_separated(&plan, p, q));
        let shift = Point2::new(shift.0, shift.1);
        let moved: Vec<PillarRect> = pillars
            .iter()
            .map(|r| PillarRect::new(rotate_translate(r.center, 0.0, shift), r.width, r.depth, 0))
            .collect();
        let before = count_obstructions(&plan, &on_floor(p), &on_floor(q)).unwrap();
        let after = count_obstructions(
            &plan_from(&[], &moved),
            &on_floor(rotate_translate(p, 0.0, shift)),
            &on_floor(rotate_translate(q, 0.0, shift)),
        )
        .unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn distance_is_a_metric(
        a in (coord(), coord(), 0..4i32),
        b in (coord(), coord(), 0..4i32),
        c in (coord(), coord(), 0..4i32),
    ) {
        let plan = FloorPlan::new("tower", 4).unwrap();
        let [a, b, c] = [a, b, c].map(|(x, y, f)| Point3::new(x, y, f));
        let ab = distance(&a, &b, &plan);
        prop_assert_eq!(ab, distance(&b, &a, &plan));
        prop_assert!(ab <= distance(&a, &c, &plan) + distance(&c, &b, &plan) + 1e-9);
        prop_assert!(ab >= 0.0);
    }

    #[test]
    fn models_increase_with_distance(
        channel in prop::sample::select(vec![1u8, 7, 11]),
        d1 in 1.0..100.0f64,
        step in 1e-3..50.0f64,
        walls in 0..4u32,
        scenario in prop::sample::select(vec![Scenario::BusyOffice, Scenario::OpenSpace, Scenario::Corridor]),
    ) {
        let models = PathLossModel::standard_set(&ModelParams::default(), scenario);
        let obs = ObstructionSummary::new().with(Material::Concrete, walls);
        let ch = Channel::new(channel).unwrap();
        for m in &models {
            let near = m.path_loss(&LinkContext::new(ch, d1).with_obstructions(obs.clone())).unwrap();
            let far = m.path_loss(&LinkContext::new(ch, d1 + step).with_obstructions(obs.clone())).unwrap();
            prop_assert!(far > near, "{} not increasing: {near} -> {far}", m.name());
        }
    }

    #[test]
    fn tiplm_never_drops_with_more_walls_or_floors(
        d in 1.0..100.0f64,
        counts in (0..4u32, 0..4u32, 0..4u32),
        which in 0..3usize,
        up in any::<bool>(),
    ) {
        let p = TIplmParams::default();
        let base = ObstructionSummary::new()
            .with(Material::Wood, counts.0)
            .with(Material::Glass, counts.1)
            .with(Material::Pillar, counts.2);
        let more = base.clone().with([Material::Wood, Material::Glass, Material::Pillar][which].clone(), 1);
        let ctx = |obs: ObstructionSummary, delta: i32| {
            LinkContext::new(Channel::new(1).unwrap(), d)
                .with_obstructions(obs)
                .with_floor_delta(delta)
                .with_scenario(Scenario::Corridor)
        };
        let pl = |obs: ObstructionSummary, delta: i32| models::tiplm_path_loss(&ctx(obs, delta), &p).unwrap();
        prop_assert!(pl(more, 0) >= pl(base.clone(), 0));
        let deltas: &[i32] = if up { &[0, 1, 2, 3] } else { &[0, -1, -2] };
        for pair in deltas.windows(2) {
            prop_assert!(pl(base.clone(), pair[1]) >= pl(base.clone(), pair[0]));
        }
    }

    #[test]
    fn rssi_and_path_loss_are_inverse(
        pl in 0.0..200.0f64,
        tx in -10.0..30.0f64,
        gt in -5.0..15.0f64,
        gr in -5.0..15.0f64,
    ) {
        let budget = LinkBudget::new(tx, gt, gr).unwrap();
        let back = models::rssi_to_path_loss(models::predicted_rssi(pl, &budget), &budget);
        prop_assert!((back - pl).abs() <= 1e-9);
    }

    #[test]
    fn aggregate_ignores_record_order(
        rows in prop::collection::vec((1.0..25.0f64, -95.0..-30.0f64), 1..60),
        seed in any::<u64>(),
    ) {
        let plan = FloorPlan::new("open", 1).unwrap();
        let ap = Point3::new(0.0, 0.0, 0);
        let records: Vec<Measurement> = rows
            .iter()
            .enumerate()
            .map(|(i, &(x, rssi))| Measurement {
                timestamp: i as f64,
                channel: Channel::new(1).unwrap(),
                tx: ap,
                rx: Point3::new(x, 0.0, 0),
                rssi_dbm: rssi,
                tag: String::new(),
            })
            .collect();
        let mut shuffled = records.clone();
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let set = |records| MeasurementSet { records, budget: LinkBudget::default(), plan_ref: None };
        let a = aggregate(&set(records), &plan, 0.5).unwrap();
        let b = aggregate(&set(shuffled), &plan, 0.5).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.iter().map(|p| p.sample_count).sum::<usize>(), rows.len());
        for p in &a {
            prop_assert!(p.pl_min <= p.pl_mean && p.pl_mean <= p.pl_max);
        }
    }

    #[test]
    fn fits_are_exact_orthogonal_and_order_free(
        distances in prop::collection::vec(1.0..40.0f64, 2..40),
        nt in 10.0..40.0f64,
        noise in prop::collection::vec(-3.0..3.0f64, 40),
        rot in 0..40usize,
    ) {
        prop_assume!(distances.iter().any(|&d| d > 1.01));
        let p = TIplmParams::default();
        let f = channel_to_frequency(Channel::new(1).unwrap());
        let point = |d: f64, pl: f64| tiplm::ingest::AggregatedPoint {
            distance_m: d,
            obstructions: ObstructionSummary::new(),
            floor_delta: 0,
            pl_min: pl,
            pl_mean: pl,
            pl_max: pl,
            sample_count: 1,
        };
        let exact: Vec<_> = distances.iter().map(|&d| point(d, 20.0 * f.log10() - 20.0 + nt * d.log10())).collect();
        let fit = calibrate::fit_nt(&exact, f, &p).unwrap();
        prop_assert!((fit.estimate - nt).abs() <= 1e-9);

        let noisy: Vec<_> = exact.iter().zip(&noise).map(|(q, e)| point(q.distance_m, q.pl_mean + e)).collect();
        let fit = calibrate::fit_nt(&noisy, f, &p).unwrap();
        let orth: f64 = noisy
            .iter()
            .map(|q| (q.pl_mean - (20.0 * f.log10() - 20.0 + fit.estimate * q.distance_m.log10())) * q.distance_m.log10())
            .sum();
        prop_assert!(orth.abs() <= 1e-6, "residuals not orthogonal: {orth}");

        let mut rotated = noisy.clone();
        rotated.rotate_left(rot % noisy.len());
        rotated.reverse();
        let again = calibrate::fit_nt(&rotated, f, &p).unwrap();
        prop_assert!((again.estimate - fit.estimate).abs() <= 1e-12);
        let g1 = calibrate::fit_gamma_weighted(&noisy, f, 1.0, Weighting::SampleCount).unwrap();
        let g2 = calibrate::fit_gamma_weighted(&rotated, f, 1.0, Weighting::SampleCount).unwrap();
        prop_assert!((g1.estimate - g2.estimate).abs() <= 1e-12);
    }

    #[test]
    fn mse_is_a_symmetric_nonnegative_distance(
        pairs in prop::collection::vec((-120.0..0.0f64, -120.0..0.0f64), 1..50),
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let ab = mse(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab, mse(&b, &a).unwrap());
        prop_assert_eq!(mse(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ab == 0.0, a == b);
    }

    #[test]
    fn histogram_holds_every_residual_once(
        residuals in prop::collection::vec(-15.0..15.0f64, 1..300),
        width in 0.25..3.0f64,
    ) {
        let stats = error_stats(&residuals, width).unwrap();
        prop_assert_eq!(stats.histogram.iter().map(|b| b.count).sum::<usize>(), residuals.len());
        prop_assert!(stats.std_dev >= 0.0);
        for pair in stats.histogram.windows(2) {
            prop_assert_eq!(pair[0].high, pair[1].low);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coverage_is_independent_of_evaluation_order(
        walls in prop::collection::vec(wall(), 0..6),
        ap in point(),
        resolution in 0.5..2.0f64,
    ) {
        let plan = plan_from(&walls, &[]);
        let model = PathLossModel::TIplm { params: TIplmParams::default(), scenario: Scenario::BusyOffice };
        let ch = Channel::new(11).unwrap();
        let ap = on_floor(ap);
        let par = coverage_grid(&plan, &ap, &model, &LinkBudget::default(), ch, 0, resolution).unwrap();
        let seq = coverage_grid_sequential(&plan, &ap, &model, &LinkBudget::default(), ch, 0, resolution).unwrap();
        prop_assert_eq!(par.values.len(), par.width * par.height);
        let bits = |g: &tiplm::coverage::CoverageGrid| g.values.iter().map(|v| v.map(f64::to_bits)).collect::<Vec<_>>();
        prop_assert_eq!(bits(&par), bits(&seq));
    }

    #[test]
    fn synth_is_a_pure_function_of_its_config(seed in any::<u64>(), walls in prop::collection::vec(wall(), 1..6)) {
        let mut cfg = SynthConfig::new(plan_from(&walls, &[]), Point3::new(10.0, 10.0, 0), Channel::new(7).unwrap());
        cfg.seed = seed;
        cfg.n_locations = 20;
        cfg.samples_per_location = 3;
        let a = synth::generate(&cfg).unwrap();
        let b = synth::generate(&cfg.clone()).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn channel_frequencies_are_distinct() {
    let freqs: Vec<f64> = Channel::all().map(channel_to_frequency).collect();
    for (i, f) in freqs.iter().enumerate() {
        assert!(freqs[i + 1..].iter().all(|g| g != f));
    }
    assert_eq!(freqs.len(), 14);
}
