//! Built-in empirical tables.

/// Centre frequencies (MHz) of the fourteen 2.4 GHz WiFi channels,
/// indexed by `channel - 1`.
pub const CHANNEL_FREQUENCIES_MHZ: [f64; 14] = [
    2412.0, 2417.0, 2422.0, 2427.0, 2432.0, 2437.0, 2442.0, 2447.0, 2452.0, 2457.0, 2462.0, 2467.0,
    2472.0, 2484.0,
];

/// Per-obstacle attenuation in dB, keyed by material name.
pub const WALL_LOSS_DB: [(&str, f64); 4] = [
    ("wood", 2.67),
    ("concrete", 2.73),
    ("pillar", 6.0),
    ("glass", 4.5),
];

/// Busy-office distance coefficient N_T for 1..=5 obstacles on the line of
/// sight, per channel.
pub const NT_BUSY_OFFICE: [(u8, [f64; 5]); 3] = [
    (1, [31.1, 30.1, 31.8, 31.2, 31.3]),
    (7, [32.9, 28.5, 26.7, 29.1, 27.4]),
    (11, [29.3, 28.4, 27.0, 28.0, 28.4]),
];

/// Open-space N_T per channel.
pub const NT_OPEN_SPACE: [(u8, f64); 3] = [(1, 19.2), (7, 18.0), (11, 17.3)];

/// Corridor N_T, applied to every channel.
pub const NT_CORRIDOR: f64 = 25.8;

/// Floor attenuation factor in dB by signed floor difference (receiver
/// floor minus transmitter floor).
pub const FLOOR_ATTENUATION_DB: [(i32, f64); 6] = [
    (-2, 36.0),
    (-1, 21.0),
    (0, 0.0),
    (1, 21.0),
    (2, 33.0),
    (3, 40.0),
];

/// ITU-R distance power loss coefficient for office, residential and
/// commercial areas.
pub const ITU_R_N_OFFICE: f64 = 30.0;
pub const ITU_R_N_RESIDENTIAL: f64 = 28.0;
pub const ITU_R_N_COMMERCIAL: f64 = 22.0;

/// Number of floors covered by the default ITU-R floor penetration table.
pub const ITU_R_DEFAULT_FLOOR_ROWS: u32 = 3;

/// Default ITU-R floor penetration loss for `n ≥ 1` floors:
/// `15 + 4 (n − 1)` dB. This is the common ITU-R office figure, not a
/// value measured in the T-IPLM campaign.
pub fn itu_r_default_floor_penetration(n: u32) -> f64 {
    if n == 0 {
        0.0
    } else {
        15.0 + 4.0 * f64::from(n - 1)
    }
}
