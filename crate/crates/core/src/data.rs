//! The bundled heart arrangement and its building data.
//!
//! Row `i` of [`TABLE`] is the line `L_{i+1}` with its label in `(Z/7)^4`.
//! Rows 0..25 are the closure lines, 25..31 the six auxiliary lines paired at
//! `P`, `Q`, `R`, and 31..34 the triangle lines `L_P`, `L_Q`, `L_R`.

/// Dual coordinates and label of every line, in table order.
pub const TABLE: [([i64; 3], [u32; 4]); 34] = [
    ([0, 0, 1], [2, 4, 3, 5]),
    ([0, 1, 0], [6, 2, 4, 2]),
    ([1, 0, 0], [1, 2, 4, 1]),
    ([0, 1, -1], [6, 5, 4, 2]),
    ([1, 0, -1], [5, 1, 2, 6]),
    ([1, 1, -1], [3, 0, 4, 3]),
    ([1, -1, 0], [3, 2, 1, 0]),
    ([1, 1, 0], [4, 3, 4, 3]),
    ([1, 1, -2], [1, 6, 5, 6]),
    ([1, -1, 1], [5, 1, 1, 3]),
    ([1, -1, -1], [2, 1, 6, 1]),
    ([0, 2, -1], [2, 2, 0, 3]),
    ([2, 0, -1], [6, 1, 5, 6]),
    ([1, 0, 1], [3, 4, 2, 0]),
    ([1, -2, 1], [6, 6, 3, 2]),
    ([1, 1, 1], [3, 6, 6, 6]),
    ([1, -3, 1], [3, 6, 4, 6]),
    ([0, 1, -2], [4, 2, 4, 2]),
    ([2, -1, 0], [3, 5, 2, 6]),
    ([1, 1, -3], [6, 4, 4, 6]),
    ([3, -1, -1], [2, 4, 0, 2]),
    ([0, 1, 1], [1, 3, 4, 5]),
    ([2, -1, -1], [3, 1, 4, 5]),
    ([1, 0, -2], [3, 4, 2, 6]),
    ([1, -2, 0], [3, 6, 3, 3]),
    ([6, -4, 5], [5, 4, 6, 2]),
    ([6, -2, 1], [3, 2, 1, 1]),
    ([5, -3, 9], [5, 5, 4, 6]),
    ([1, -3, 13], [6, 5, 6, 4]),
    ([2, -1, -3], [2, 6, 3, 1]),
    ([9, -5, -1], [6, 4, 0, 4]),
    ([8, 9, -22], [3, 5, 2, 0]),
    ([20, -9, 22], [5, 2, 5, 0]),
    ([20, -9, -55], [5, 5, 4, 4]),
];

/// Order of the cyclic factors of the group.
pub const HEART_P: u32 = 7;
/// Rank of the group.
pub const HEART_R: usize = 4;

/// The triangle triple `(P, Q, R)` whose scheme is a double point.
pub const TRIANGLE: [[i64; 3]; 3] = [[1, 4, 2], [3, 14, 3], [14, 25, 1]];

/// The auxiliary lines: rows 0,1 meet at `P`, rows 2,3 at `Q`, rows 4,5 at `R`.
pub const AUX_LINES: [[i64; 3]; 6] =
    [[6, -4, 5], [6, -2, 1], [5, -3, 9], [1, -3, 13], [2, -1, -3], [9, -5, -1]];

/// The projective frame `q1..q4` fixed by the incidence scheme.
pub const BASE_POINTS: [[i64; 3]; 4] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];

/// Number of closure lines at the head of [`TABLE`].
pub const CLOSURE_ROWS: usize = 25;
/// Index of `L_P` in [`TABLE`]; `L_Q` and `L_R` follow.
pub const TRIANGLE_ROW: usize = 31;
