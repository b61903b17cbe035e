//! Printed outcome tables for the primary, first and second repeated
//! attempts: each row's conditional probability expression and the
//! unnormalized spectator state, exactly as typeset.
//!
//! Probabilities are conditional on the row's history prefix. States are
//! returned as `[amp of |0>, amp of |1>]` and are meaningful only up to
//! normalization and global phase.

use crate::error::{Error, Result};
use crate::formulas::{kernel_x, kernel_y, kernel_z};
use crate::state::{InfoState, Ket1};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub table: u8,
    pub label: &'static str,
    /// Outcome digits, primary attempt first.
    pub history: &'static [u8],
    /// Whether the row is printed with fidelity 1.
    pub success: bool,
}

macro_rules! rows {
    ($( $t:literal $label:literal [$($d:literal),*] $s:literal ;)*) => {
        &[$(TableRow { table: $t, label: $label, history: &[$($d),*], success: $s }),*]
    };
}

/// Every printed row, in table order.
pub const TABLE_ROWS: &[TableRow] = rows! {
    1 "B0" [0] false; 1 "B1" [1] true; 1 "B2" [2] true; 1 "B3" [3] false;
    2 "B00" [0,0] false; 2 "B01" [0,1] true; 2 "B02" [0,2] true; 2 "B03" [0,3] false;
    2 "B30" [3,0] false; 2 "B31" [3,1] true; 2 "B32" [3,2] true; 2 "B33" [3,3] false;
    3 "B000" [0,0,0] false; 3 "B001" [0,0,1] true; 3 "B002" [0,0,2] true; 3 "B003" [0,0,3] false;
    3 "B030" [0,3,0] true; 3 "B031" [0,3,1] false; 3 "B032" [0,3,2] false; 3 "B033" [0,3,3] true;
    3 "B300" [3,0,0] true; 3 "B301" [3,0,1] false; 3 "B302" [3,0,2] false; 3 "B303" [3,0,3] true;
    3 "B330" [3,3,0] false; 3 "B331" [3,3,1] true; 3 "B332" [3,3,2] true; 3 "B333" [3,3,3] false;
};

pub fn find_row(table: u8, label: &str) -> Result<&'static TableRow> {
    TABLE_ROWS
        .iter()
        .find(|r| r.table == table && r.label == label)
        .ok_or_else(|| Error::Lookup(format!("no row {label:?} in table {table}")))
}

/// The printed conditional probability of a row.
pub fn table_row_probability(table: u8, label: &str, chi: f64, info: &InfoState) -> Result<f64> {
    let row = find_row(table, label)?;
    let h = std::f64::consts::FRAC_PI_2 - chi;
    let x = |n| kernel_x(n, chi);
    let y = |n| kernel_y(n, chi);
    let z = |n| kernel_z(n, chi, info);
    let zh = |n| kernel_z(n, h, info);
    let (s, c) = chi.sin_cos();
    let (wa, wb) = (info.weight_a(), info.weight_b());
    let p = match row.label {
        "B0" => wa * c.powi(4) + wb * s.powi(4),
        "B1" | "B2" => s * s * c * c,
        "B3" => wa * s.powi(4) + wb * c.powi(4),

        "B00" => z(12) / z(4) / y(6),
        "B01" => x(6) / z(4) / y(6),
        "B02" => x(4) / z(4),
        "B03" => x(2),
        "B30" => x(2),
        "B31" => x(4) / zh(4),
        "B32" => x(6) / zh(4) / y(6),
        "B33" => zh(12) / zh(4) / y(6),

        "B000" => z(36) / z(12) / y(6) / y(18),
        "B001" => x(18) / z(12) / y(6) / y(18),
        "B002" => x(12) / z(12) / y(6).powi(2),
        "B003" => x(6) / y(6).powi(2),
        "B030" => x(6) / z(4) / y(6),
        "B031" => z(12) / z(4) / y(6),
        "B032" => x(2),
        "B033" => x(4) / z(4),
        "B300" => x(4) / zh(4),
        "B301" => x(2),
        "B302" => zh(12) / zh(4) / y(6),
        "B303" => kernel_x(6, h) / zh(4) / y(6),
        "B330" => x(6) / y(6).powi(2),
        "B331" => x(12) / zh(12) / y(6).powi(2),
        "B332" => x(18) / zh(12) / y(6) / y(18),
        "B333" => zh(36) / zh(12) / y(6) / y(18),
        _ => unreachable!("row table and match arms out of sync"),
    };
    Ok(p)
}

/// The printed spectator state of a row (unnormalized).
pub fn printed_state(table: u8, label: &str, chi: f64, info: &InfoState) -> Result<Ket1> {
    let row = find_row(table, label)?;
    let (a, b) = (info.a(), info.b());
    let (s, c) = chi.sin_cos();
    // a * x|0> + b * y|1> or a * x|1> + b * y|0>
    let straight = |x: f64, y: f64| [a * x, b * y];
    let crossed = |x: f64, y: f64| [b * y, a * x];
    let st: Ket1 = match row.label {
        "B0" => straight(c * c, s * s),
        "B1" => straight(1.0, -1.0),
        "B2" => crossed(1.0, 1.0),
        "B3" => crossed(s * s, -c * c),

        "B00" => straight(c, s),
        "B01" => straight(1.0, -1.0),
        "B02" => crossed(1.0, 1.0),
        "B03" => crossed(s, -c),
        "B30" => straight(c, s),
        "B31" => straight(1.0, -1.0),
        "B32" => crossed(1.0, 1.0),
        "B33" => crossed(s, -c),

        "B000" => straight(c.powi(18), s.powi(18)),
        "B001" => straight(1.0, -1.0),
        "B002" => crossed(1.0, 1.0),
        "B003" => crossed(c.powi(6), -s.powi(6)),
        "B030" => straight(1.0, 1.0),
        "B031" => straight(c.powi(6), -s.powi(6)),
        "B032" => crossed(c * c, s * s),
        "B033" => crossed(1.0, -1.0),
        "B300" => straight(1.0, 1.0),
        "B301" => straight(s * s, -c * c),
        "B302" => crossed(s.powi(6), c.powi(6)),
        "B303" => crossed(1.0, -1.0),
        "B330" => straight(s.powi(6), c.powi(6)),
        "B331" => straight(1.0, -1.0),
        "B332" => crossed(1.0, 1.0),
        "B333" => crossed(s.powi(18), -c.powi(18)),
        _ => unreachable!("row table and match arms out of sync"),
    };
    Ok(st)
}
