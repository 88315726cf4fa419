//! Test sets and search cases.

/// The three test sets a critical lattice places on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestSetKind {
    One,
    Two,
    Three,
}

impl TestSetKind {
    pub fn sigma(self) -> i32 {
        match self {
            TestSetKind::One => -1,
            _ => 1,
        }
    }

    pub fn count(self) -> usize {
        match self {
            TestSetKind::Three => 7,
            _ => 6,
        }
    }

    /// Exact integer coordinate vectors of the test set.
    pub fn vectors(self) -> &'static [[i32; 3]] {
        match self {
            TestSetKind::One => &[
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [0, 1, -1],
                [-1, 0, 1],
                [1, -1, 0],
            ],
            TestSetKind::Two => &[
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [0, 1, 1],
                [1, 0, 1],
                [1, 1, 0],
            ],
            TestSetKind::Three => &[
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [0, 1, 1],
                [1, 0, 1],
                [1, 1, 0],
                [1, 1, 1],
            ],
        }
    }
}

/// The four cases of the critical-lattice characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SearchCase {
    I,
    II,
    III,
    IV,
}

impl SearchCase {
    pub const ALL: [SearchCase; 4] = [SearchCase::I, SearchCase::II, SearchCase::III, SearchCase::IV];

    pub fn kind(self) -> TestSetKind {
        match self {
            SearchCase::I => TestSetKind::One,
            SearchCase::II => TestSetKind::Two,
            _ => TestSetKind::Three,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SearchCase::I => "I",
            SearchCase::II => "II",
            SearchCase::III => "III",
            SearchCase::IV => "IV",
        }
    }

    pub fn parse(s: &str) -> Option<SearchCase> {
        match s.trim().to_uppercase().as_str() {
            "I" | "1" => Some(SearchCase::I),
            "II" | "2" => Some(SearchCase::II),
            "III" | "3" => Some(SearchCase::III),
            "IV" | "4" => Some(SearchCase::IV),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_one_vectors_exact() {
        assert_eq!(
            TestSetKind::One.vectors(),
            &[
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [0, 1, -1],
                [-1, 0, 1],
                [1, -1, 0]
            ]
        );
    }

    #[test]
    fn kind_three_extends_kind_two() {
        let two = TestSetKind::Two.vectors();
        let three = TestSetKind::Three.vectors();
        assert_eq!(&three[..6], two);
        assert_eq!(three[6], [1, 1, 1]);
        assert_eq!(three.len(), 7);
    }

    #[test]
    fn test_set_relations() {
        // u4 = u2 + sigma u3, u5 = u3 + sigma u1, u6 = u1 + sigma u2
        for kind in [TestSetKind::One, TestSetKind::Two, TestSetKind::Three] {
            let u = kind.vectors();
            let s = kind.sigma();
            for k in 0..3 {
                assert_eq!(u[3][k], u[1][k] + s * u[2][k], "u4 relation, {kind:?}");
                assert_eq!(u[4][k], u[2][k] + s * u[0][k], "u5 relation, {kind:?}");
                assert_eq!(u[5][k], u[0][k] + s * u[1][k], "u6 relation, {kind:?}");
            }
            if kind == TestSetKind::Three {
                for k in 0..3 {
                    assert_eq!(u[6][k], u[0][k] + u[3][k], "u7 relation");
                }
            }
        }
    }
}
