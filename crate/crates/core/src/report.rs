use serde::Serialize;

/// Reports stop collecting after this many violations.
pub const MAX_VIOLATIONS: usize = 100;

/// Ordered list of violations found by a validator.
///
/// Validators scan in a fixed order, so the first entry is always the
/// lexicographically first offending item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport<V> {
    violations: Vec<V>,
    truncated: bool,
}

impl<V> Default for ValidationReport<V> {
    fn default() -> Self {
        Self {
            violations: Vec::new(),
            truncated: false,
        }
    }
}

impl<V> ValidationReport<V> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a violation. Returns `false` once the cap is reached so
    /// scanners can stop early.
    pub fn push(&mut self, violation: V) -> bool {
        if self.violations.len() >= MAX_VIOLATIONS {
            self.truncated = true;
            return false;
        }
        self.violations.push(violation);
        true
    }

    pub fn is_full(&self) -> bool {
        self.violations.len() >= MAX_VIOLATIONS
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[V] {
        &self.violations
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when violations were dropped because of the cap.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn first(&self) -> Option<&V> {
        self.violations.first()
    }
}
