//! Bound values computed independently at 50-digit precision from the
//! printed formulas. Shared by the core tests and the acceptance harness.

#![allow(clippy::excessive_precision)]

/// `(m, n, r, p, alpha, delta, value)`
#[rustfmt::skip]
pub const KG: [(f64, u64, u64, f64, f64, f64, f64); 10] = [
    (1e6, 10, 9, 0.5, 1.0, 0.01, 171.42642088873122768),
    (100.0, 10, 9, 0.5, 1.0, 0.01, 171.42642088873122768),
    (1000.0, 10, 9, 0.5, 0.5, 0.05, 645.01273485535654482),
    (10.0, 6, 3, 0.3, 0.7, 0.1, 934.88187032255245582),
    (1.0, 5, 2, 0.9, 0.2, 0.5, 253501.4433180534586),
    (1e9, 100, 50, 0.05, 0.8, 0.001, 211.81874707821803615),
    (50.0, 20, 10, 0.5, 0.33, 0.01, 1709.2173759473920168),
    (5000.0, 8, 8, 0.25, 0.66, 0.2, 327.09690382778640316),
    (1.0, 10, 1, 0.5, 1.0, 0.01, 4454.1515510836183204),
    (1e12, 1000, 100, 0.5, 1.0, 0.01, 35.6952298267356084),
];

/// `(m, t_size, theta, alpha, delta, value)`
#[rustfmt::skip]
pub const CN: [(f64, f64, u128, f64, f64, f64); 10] = [
    (100.0, 1e5, 100_000, 0.5, 0.01, 2.1491826144223649722),
    (1.0, 1e5, 100_000, 0.1, 0.01, 1074.5913072111824264),
    (1e4, 1e5, 100_000, 0.5, 0.01, 0.034386921830757839555),
    (1e6, 1e5, 100_000, 0.3, 0.05, 0.052161335064807279879),
    (37.0, 1000.0, 720, 0.25, 0.1, 6.9234134751776442969),
    (1.0, 16.0, 2, 0.9, 0.5, 21.187025535652970275),
    (500.0, 8000.0, 1_000_000_000, 0.05, 0.001, 7.0614673404375843732),
    (2000.0, 1e6, 100_000, 0.4, 0.2, 0.11185592134974287184),
    (64.0, 1024.0, 3_628_800, 0.5, 0.01, 4.0315016678046865581),
    (1e7, 1e7, 1_000_000_000_000, 0.01, 0.01, 0.032666832740298906094),
];

/// `(m, t_size, theta, alpha, value)` with the default constant
#[rustfmt::skip]
pub const CN_LOWER: [(f64, f64, u128, f64, f64); 10] = [
    (1e4, 1e4, 1 << 10, 0.5, 7.8125e-16),
    (100.0, 1e4, 1 << 10, 0.5, 7.8125e-14),
    (1000.0, 500.0, 1 << 20, 0.5, 3.125e-14),
    (40.0, 1000.0, 1 << 20, 0.5, 3.90625e-13),
    (80.0, 1000.0, 1 << 20, 0.5, 1.953125e-13),
    (1e6, 1e5, 1 << 100, 0.25, 1.5625e-15),
    (50.0, 60.0, 2, 0.1, 7.8124999999999995663e-14),
    (200.0, 100.0, 1000, 0.3, 1.2976281620653759652e-13),
    (30.0, 1e9, 32, 0.4, 1.6276041666666665763e-13),
    (1e5, 1e5, 100_000_000_000_000_000_000, 0.01, 2.5952563241307517802e-14),
];

/// `(m, a, depth, words, delta, value)`; |Θ| = words!
#[rustfmt::skip]
pub const RT: [(f64, u64, u64, u64, f64, f64); 10] = [
    (100.0, 3, 8, 100_000, 0.01, 168208.899012604333),
    (1.0, 1, 4, 8, 0.05, 985.0940573137469547),
    (1e6, 2, 10, 8, 0.05, 0.96200591534545601045),
    (50.0, 3, 4, 8, 0.1, 11.613983182196425369),
    (1000.0, 4, 5, 16, 0.01, 2.316799360081051197),
    (10.0, 2, 3, 8, 0.5, 104.71607642026600431),
    (1e5, 3, 8, 1000, 0.01, 57.732907624017114418),
    (200.0, 5, 2, 20, 0.2, 117.08624343658403929),
    (7.0, 2, 6, 12, 0.05, 56.627899973586130487),
    (1e9, 3, 8, 100_000, 0.01, 10255.076909776212956),
];

/// `(m, theta, delta, value)`
#[rustfmt::skip]
pub const GAMMA: [(f64, u128, f64, f64); 10] = [
    (100.0, 5040, 0.1, 0.10827746454059459929),
    (1.0, 1, 1.0, 0.0),
    (20.0, 120, 0.1, 0.35450384178880458114),
    (1000.0, 1_000_000, 0.05, 0.016811242831518265042),
    (3.0, 2, 0.5, 0.46209812037329687294),
    (50.0, 3_628_800, 0.01, 0.39419165518127213285),
    (1e5, 100_000, 0.001, 0.00018420680743952365451),
    (7.0, 720, 0.2, 1.1698127320634573306),
    (250.0, 1 << 20, 0.05, 0.067434703539011588505),
    (1.0, 1_000_000_000_000, 0.9, 27.736381631586374485),
];

/// `(m, theta, delta, realizable, loss, value)`
#[rustfmt::skip]
pub const OCCAM: [(f64, u128, f64, bool, f64, f64); 10] = [
    (1000.0, 1_000_000, 0.05, true, 0.0, 0.016811242831518265042),
    (1000.0, 1_000_000, 0.05, false, 0.0, 0.1296581768787386006),
    (100.0, 5040, 0.1, false, 0.1, 0.42905541256845267541),
    (10.0, 120, 0.5, true, 0.0, 0.54806389233419913037),
    (1e4, 1_000_000_000, 0.01, false, 0.25, 0.30032736434876607216),
    (5.0, 2, 0.9, false, 0.0, 0.39962674990990570224),
    (2000.0, 3_628_800, 0.05, true, 0.0, 0.0090500724233147531166),
    (30.0, 720, 0.2, false, 0.05, 0.57245220274025072456),
    (1e6, 100_000, 0.001, false, 0.5, 0.50429193205257869448),
    (1.0, 1, 1.0, true, 0.0, 0.0),
];
