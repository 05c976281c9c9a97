//! Generators for standard example graphs, looked up by family name.
//!
//! A builder string is `family:params`, e.g. `projective:2`,
//! `grassmannian:4,2`, `toric:1,1,1` or `bundle:projective:2@1,0,1`
//! (graph spec, then the Poincaré coefficients of the fixed component).

mod families;

use std::collections::BTreeMap;
use std::fmt;

use crate::cohomology::FiberData;
use crate::connection::EdgeGeometry;
use crate::error::{GkmError, Result};
use crate::graph::{GkmGraph, GraphDocument};

pub use families::{
    build_bundle_example, build_grassmannian, build_projective, build_toric_product, BundleFamily, GrassmannianFamily,
    ProjectiveFamily, ToricFamily, Twist, TwistEntry,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuilderSpec {
    Projective(usize),
    Grassmannian { n: usize, k: usize },
    ToricProduct(Vec<usize>),
    Bundle { base: Box<BuilderSpec>, fiber: FiberData },
}

impl BuilderSpec {
    pub fn build(&self) -> Result<Example> {
        match self {
            BuilderSpec::Projective(n) => Ok(Example::plain(build_projective(*n)?)),
            BuilderSpec::Grassmannian { n, k } => Ok(Example::plain(build_grassmannian(*n, *k)?)),
            BuilderSpec::ToricProduct(f) => Ok(Example::plain(build_toric_product(f)?)),
            BuilderSpec::Bundle { base, fiber } => build_bundle_example(base, fiber.clone(), None),
        }
    }
}

fn join(values: impl IntoIterator<Item = usize>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for BuilderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuilderSpec::Projective(n) => write!(f, "projective:{n}"),
            BuilderSpec::Grassmannian { n, k } => write!(f, "grassmannian:{n},{k}"),
            BuilderSpec::ToricProduct(factors) => write!(f, "toric:{}", join(factors.iter().copied())),
            BuilderSpec::Bundle { base, fiber } => {
                write!(f, "bundle:{base}@{}", join(fiber.poincare().iter().copied()))
            }
        }
    }
}

/// A built graph together with the optional data some families attach.
#[derive(Debug, Clone)]
pub struct Example {
    pub graph: GkmGraph,
    pub fiber: Option<FiberData>,
    pub geometry: Option<EdgeGeometry>,
}

impl Example {
    pub fn plain(graph: GkmGraph) -> Self {
        Example { graph, fiber: None, geometry: None }
    }

    pub fn into_document(self) -> GraphDocument {
        let mut doc = GraphDocument::new(self.graph);
        if let Some(g) = &self.geometry {
            doc = doc.with_geometry(g);
        }
        if let Some(f) = self.fiber {
            doc = doc.with_fiber(f);
        }
        doc
    }
}

/// A named family of example graphs.
pub trait FamilyBuilder: Send + Sync {
    fn name(&self) -> &'static str;

    /// Parameter syntax, shown in help output.
    fn usage(&self) -> &'static str;

    fn parse(&self, params: &str, registry: &BuilderRegistry) -> Result<BuilderSpec>;
}

pub struct BuilderRegistry {
    families: BTreeMap<&'static str, Box<dyn FamilyBuilder>>,
}

impl BuilderRegistry {
    pub fn empty() -> Self {
        BuilderRegistry { families: BTreeMap::new() }
    }

    pub fn register(&mut self, family: Box<dyn FamilyBuilder>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Option<&dyn FamilyBuilder> {
        self.families.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.families.keys().copied()
    }

    pub fn usage(&self) -> Vec<String> {
        self.families.values().map(|f| format!("{}:{}", f.name(), f.usage())).collect()
    }

    /// Parses `family:params`.
    pub fn parse(&self, spec: &str) -> Result<BuilderSpec> {
        let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
        let family = self.get(name.trim()).ok_or_else(|| GkmError::UnknownFamily(name.trim().to_owned()))?;
        family.parse(params.trim(), self)
    }

    pub fn build(&self, spec: &str) -> Result<Example> {
        self.parse(spec)?.build()
    }
}

impl Default for BuilderRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(ProjectiveFamily));
        r.register(Box::new(GrassmannianFamily));
        r.register(Box::new(ToricFamily));
        r.register(Box::new(BundleFamily));
        r
    }
}

pub(crate) fn parse_list(params: &str) -> Result<Vec<usize>> {
    if params.is_empty() {
        return Err(GkmError::InvalidParams("missing parameters".into()));
    }
    params
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| GkmError::InvalidParams(format!("`{p}` is not a count"))))
        .collect()
}
