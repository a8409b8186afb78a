//! Open projects and their analysis state.
//!
//! Each project has a writer lane (a mutex around its orchestrator) and a
//! published [`State`] that readers clone without waiting on writers.
//! Mutations run against a draft copy and are published only after the
//! analysis and the save both succeed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use storyscope::analytics::EmbeddingTable;
use storyscope::incremental::{AnalysisSnapshot, AnalyzeOutcome, Orchestrator};
use storyscope::lexicon::Lexicons;
use storyscope::text::DeltaOp;

use crate::project::{Project, ProjectError};

/// An immutable view of one project: its document, registry and settings
/// together with the snapshot computed from them.
#[derive(Debug)]
pub struct State {
    pub project: Project,
    pub snapshot: Arc<AnalysisSnapshot>,
}

pub struct Handle {
    writer: Mutex<Orchestrator>,
    current: RwLock<Arc<State>>,
}

impl Handle {
    pub fn state(&self) -> Arc<State> {
        Arc::clone(&self.current.read())
    }
}

/// What a mutation wants from the analysis step.
#[derive(Debug, Default)]
pub struct AnalyzeRequest {
    pub delta: Option<Vec<DeltaOp>>,
    /// The registry was replaced wholesale, so cached paragraphs are void.
    pub registry_replaced: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError<E> {
    #[error("unknown project {0:?}")]
    NotFound(String),
    #[error(transparent)]
    Rejected(E),
    #[error(transparent)]
    Persist(#[from] ProjectError),
}

pub struct Store {
    data_dir: Option<PathBuf>,
    lexicons: Arc<Lexicons>,
    embeddings: Option<Arc<EmbeddingTable>>,
    projects: RwLock<BTreeMap<String, Arc<Handle>>>,
}

impl Store {
    /// A store that keeps projects in memory only.
    pub fn in_memory(embeddings: Option<EmbeddingTable>) -> Store {
        Store {
            data_dir: None,
            lexicons: Arc::new(Lexicons::bundled().clone()),
            embeddings: embeddings.map(Arc::new),
            projects: RwLock::new(BTreeMap::new()),
        }
    }

    /// Opens `dir` (creating it if needed) and loads every `*.json`
    /// project in it. Files that fail to load are returned alongside.
    pub fn open(
        dir: &Path,
        embeddings: Option<EmbeddingTable>,
    ) -> Result<(Store, Vec<(PathBuf, ProjectError)>), ProjectError> {
        let io = |source| ProjectError::Io {
            path: dir.to_path_buf(),
            source,
        };
        std::fs::create_dir_all(dir).map_err(io)?;
        let mut store = Store::in_memory(embeddings);
        store.data_dir = Some(dir.to_path_buf());
        let mut failures = Vec::new();
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            match Project::load(&path) {
                Ok(project) => {
                    store.insert(project);
                }
                Err(e) => failures.push((path, e)),
            }
        }
        Ok((store, failures))
    }

    pub fn embeddings(&self) -> Option<&EmbeddingTable> {
        self.embeddings.as_deref()
    }

    pub fn ids(&self) -> Vec<String> {
        self.projects.read().keys().cloned().collect()
    }

    pub fn get(&self, id: &str) -> Option<Arc<Handle>> {
        self.projects.read().get(id).cloned()
    }

    fn path_for(&self, id: &str) -> Option<PathBuf> {
        self.data_dir.as_ref().map(|d| d.join(format!("{id}.json")))
    }

    /// Analyzes and registers a project that is already on disk (or needs
    /// no disk).
    fn insert(&self, mut project: Project) -> Arc<Handle> {
        let mut orchestrator = Orchestrator::new(Arc::clone(&self.lexicons));
        let outcome = orchestrator.analyze(&project.document, None, &mut project.registry);
        let handle = Arc::new(Handle {
            writer: Mutex::new(orchestrator),
            current: RwLock::new(Arc::new(State {
                project,
                snapshot: outcome.snapshot,
            })),
        });
        let id = handle.state().project.id.clone();
        self.projects.write().insert(id, Arc::clone(&handle));
        handle
    }

    /// Analyzes, saves and registers a new project.
    pub fn create(&self, mut project: Project) -> Result<Arc<State>, ProjectError> {
        let mut orchestrator = Orchestrator::new(Arc::clone(&self.lexicons));
        let outcome = orchestrator.analyze(&project.document, None, &mut project.registry);
        if let Some(path) = self.path_for(&project.id) {
            project.save(&path)?;
        }
        let state = Arc::new(State {
            project,
            snapshot: outcome.snapshot,
        });
        let handle = Arc::new(Handle {
            writer: Mutex::new(orchestrator),
            current: RwLock::new(Arc::clone(&state)),
        });
        self.projects.write().insert(state.project.id.clone(), handle);
        Ok(state)
    }

    pub fn delete(&self, id: &str) -> Result<bool, ProjectError> {
        let Some(handle) = self.projects.write().remove(id) else {
            return Ok(false);
        };
        // Wait for an in-flight mutation so it cannot resurrect the file.
        let _lane = handle.writer.lock();
        if let Some(path) = self.path_for(id) {
            match std::fs::remove_file(&path) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(source) => return Err(ProjectError::Io { path, source }),
            }
        }
        Ok(true)
    }

    /// Runs `edit` on a draft of the project, re-analyzes, saves, and
    /// publishes. Nothing changes if `edit`, or the save, fails.
    pub fn mutate<T, E>(
        &self,
        id: &str,
        edit: impl FnOnce(&mut Project, &AnalysisSnapshot) -> Result<(T, AnalyzeRequest), E>,
    ) -> Result<(T, Arc<State>, AnalyzeOutcome), StoreError<E>> {
        let handle = self.get(id).ok_or_else(|| StoreError::NotFound(id.to_string()))?;
        let mut orchestrator = handle.writer.lock();
        if self.get(id).is_none_or(|h| !Arc::ptr_eq(&h, &handle)) {
            return Err(StoreError::NotFound(id.to_string()));
        }
        let before = handle.state();
        let mut draft = before.project.clone();
        let (value, request) = edit(&mut draft, &before.snapshot).map_err(StoreError::Rejected)?;
        if request.registry_replaced {
            orchestrator.reset();
        }
        let outcome = orchestrator.analyze(&draft.document, request.delta.as_deref(), &mut draft.registry);
        if let Some(path) = self.path_for(id) {
            if let Err(e) = draft.save(&path) {
                // Roll the orchestrator back to the published state.
                orchestrator.reset();
                let mut registry = before.project.registry.clone();
                orchestrator.analyze(&before.project.document, None, &mut registry);
                return Err(StoreError::Persist(e));
            }
        }
        let state = Arc::new(State {
            project: draft,
            snapshot: Arc::clone(&outcome.snapshot),
        });
        *handle.current.write() = Arc::clone(&state);
        Ok((value, state, outcome))
    }
}
