use std::fmt;

use thiserror::Error;

/// Row/column index of the intersection matrix: the three point sets a
/// geometry partitions the plane into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Interior = 0,
    Boundary = 1,
    Exterior = 2,
}

pub const SPACES: [Space; 3] = [Space::Interior, Space::Boundary, Space::Exterior];

/// DE-9IM matrix: `entry(r, c)` is the maximum dimension of the intersection
/// of the `r` set of the first geometry with the `c` set of the second, with
/// -1 meaning the intersection is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct De9imMatrix {
    entries: [[i8; 3]; 3],
}

impl De9imMatrix {
    pub fn from_entries(entries: [[i8; 3]; 3]) -> Self {
        debug_assert!(entries.iter().flatten().all(|d| (-1..=2).contains(d)));
        De9imMatrix { entries }
    }

    pub fn entry(&self, row: Space, col: Space) -> i8 {
        self.entries[row as usize][col as usize]
    }

    pub fn entries(&self) -> &[[i8; 3]; 3] {
        &self.entries
    }

    pub fn transpose(&self) -> De9imMatrix {
        let e = &self.entries;
        De9imMatrix {
            entries: [
                [e[0][0], e[1][0], e[2][0]],
                [e[0][1], e[1][1], e[2][1]],
                [e[0][2], e[1][2], e[2][2]],
            ],
        }
    }

    /// β of §-style binary reading: entry is non-empty.
    pub fn is_true(&self, row: Space, col: Space) -> bool {
        self.entry(row, col) >= 0
    }

    /// Matches a 9-symbol pattern over {T, F, 0, 1, 2, *} in row-major
    /// order (II IB IE BI BB BE EI EB EE).
    pub fn matches(&self, mask: &str) -> Result<bool, MaskError> {
        let symbols: Vec<char> = mask.chars().collect();
        if symbols.len() != 9 {
            return Err(MaskError::BadLength(mask.len()));
        }
        for (k, sym) in symbols.iter().enumerate() {
            let dim = self.entries[k / 3][k % 3];
            let ok = match sym {
                'T' | 't' => dim >= 0,
                'F' | 'f' => dim == -1,
                '0' => dim == 0,
                '1' => dim == 1,
                '2' => dim == 2,
                '*' => true,
                other => return Err(MaskError::BadSymbol(*other)),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for De9imMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            for d in row {
                match d {
                    -1 => write!(f, "F")?,
                    d => write!(f, "{d}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MaskError {
    #[error("mask must have exactly 9 symbols, got {0}")]
    BadLength(usize),
    #[error("mask symbol {0:?} is not one of T, F, 0, 1, 2, *")]
    BadSymbol(char),
}
