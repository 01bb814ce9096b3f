use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::{CorrelationMethod, KendallTau, Pearson, Spearman};

/// Correlation estimators keyed by name.
#[derive(Clone)]
pub struct MethodRegistry {
    methods: BTreeMap<&'static str, Arc<dyn CorrelationMethod>>,
}

impl MethodRegistry {
    pub fn empty() -> Self {
        Self {
            methods: BTreeMap::new(),
        }
    }

    pub fn register<M: CorrelationMethod + 'static>(&mut self, method: M) {
        self.methods.insert(method.name(), Arc::new(method));
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn CorrelationMethod>> {
        self.methods
            .get(name.to_ascii_lowercase().as_str())
            .cloned()
            .ok_or_else(|| Error::Unknown {
                kind: "correlation method",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.methods.keys().copied()
    }
}

impl Default for MethodRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(Spearman);
        reg.register(KendallTau);
        reg.register(Pearson);
        reg
    }
}
