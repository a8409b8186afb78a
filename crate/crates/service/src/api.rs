//! HTTP+JSON API over a [`Store`].
//!
//! Every error body is `{code, message, field?}`. Analytics responses carry
//! the `snapshot_version` they were computed from.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State as AxumState};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use storyscope::analytics::{
    bin_count, candidate_pairs, impact_graph, timeline, word_zone, AnalyticsError, Aggregate, BinRange,
    CandidatePair, ImpactGraph, PosFilter, SortOrder, Subject, Timeline, TimelineMode, WordZone,
    MIN_EMBEDDED_WORDS,
};
use storyscope::incremental::{AnalysisSnapshot, DeltaHint};
use storyscope::registry::{CharacterRecord, EntityId, GroupKey, IdentitySchema, Registry, RegistryError};
use storyscope::text::{slice_chars, DeltaOp, Span};

use crate::project::{Project, ProjectError, Settings};
use crate::store::{AnalyzeRequest, State, Store, StoreError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> ApiError {
        ApiError {
            status: status.as_u16(),
            code: code.into(),
            message: message.into(),
            field: None,
        }
    }

    fn with_field(mut self, field: impl Into<String>) -> ApiError {
        self.field = Some(field.into());
        self
    }

    fn invalid(field: &str, message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", message).with_field(field)
    }

    fn not_found(what: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", what)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<RegistryError> for ApiError {
    fn from(e: RegistryError) -> Self {
        let message = e.to_string();
        match e {
            RegistryError::UnknownEntity(_) => ApiError::not_found(message),
            RegistryError::SelfMerge | RegistryError::DuplicateAlias(_) | RegistryError::MergedEntity(_) => {
                ApiError::new(StatusCode::CONFLICT, "conflict", message)
            }
            RegistryError::SpanMismatch { .. } => ApiError::invalid("surface", message),
            RegistryError::UnknownDimension(_) => ApiError::invalid("dimension", message),
            RegistryError::UnknownCategory { .. } => ApiError::invalid("category", message),
            RegistryError::InvalidName => ApiError::invalid("surface", message),
            RegistryError::InvalidGroup(_) => ApiError::invalid("subject", message),
        }
    }
}

impl From<AnalyticsError> for ApiError {
    fn from(e: AnalyticsError) -> Self {
        match e {
            AnalyticsError::Registry(r) => r.into(),
            AnalyticsError::NoEligibleSubjects => ApiError::new(StatusCode::CONFLICT, "not_enough_data", e.to_string()),
            AnalyticsError::InvalidArgument(m) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", m),
        }
    }
}

impl From<ProjectError> for ApiError {
    fn from(e: ProjectError) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "storage", e.to_string())
    }
}

impl From<StoreError<ApiError>> for ApiError {
    fn from(e: StoreError<ApiError>) -> Self {
        match e {
            StoreError::NotFound(id) => ApiError::not_found(format!("unknown project {id:?}")),
            StoreError::Rejected(e) => e,
            StoreError::Persist(e) => e.into(),
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/projects", post(create_project).get(list_projects))
        .route("/projects/{id}", get(get_project).put(update_project).delete(delete_project))
        .route("/projects/{id}/analyze", post(analyze))
        .route("/projects/{id}/characters", get(characters))
        .route("/projects/{id}/characters/merge", post(merge))
        .route("/projects/{id}/characters/manual", post(add_manual))
        .route("/projects/{id}/characters/{cid}", axum::routing::delete(delete_character))
        .route("/projects/{id}/characters/{cid}/demographics", put(demographics))
        .route("/projects/{id}/schema", post(extend_schema).get(get_schema))
        .route("/projects/{id}/timeline", get(get_timeline))
        .route("/projects/{id}/impact/{subject}", get(get_impact))
        .route("/projects/{id}/wordzones", get(get_wordzones))
        .route("/projects/{id}/candidates", get(get_candidates))
        .route("/projects/{id}/passage", get(get_passage))
        .fallback(|| async { ApiError::not_found("no such route") })
        .with_state(store)
}

/// Parses a JSON body, naming the failing field on error.
fn body<T: DeserializeOwned>(bytes: &Bytes) -> ApiResult<T> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let err = ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", e.inner().to_string());
        if path == "." {
            err
        } else {
            err.with_field(path)
        }
    })
}

/// Query parameters, restricted to `allowed` names.
struct Params(BTreeMap<String, String>);

impl Params {
    fn new(query: Result<Query<BTreeMap<String, String>>, QueryRejection>, allowed: &[&str]) -> ApiResult<Params> {
        let Query(map) = query.map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", e.body_text()))?;
        if let Some(unknown) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(ApiError::invalid(unknown, format!("unknown query parameter {unknown:?}")));
        }
        Ok(Params(map))
    }

    fn parse<T: FromStr>(&self, name: &str) -> ApiResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.0
            .get(name)
            .map(|v| v.parse::<T>().map_err(|e| ApiError::invalid(name, format!("{name}: {e}"))))
            .transpose()
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.0.get(name).map(String::as_str)
    }
}

fn parse_enum<T: DeserializeOwned>(name: &str, value: &str) -> ApiResult<T> {
    serde_json::from_value(serde_json::Value::String(value.to_ascii_lowercase()))
        .map_err(|_| ApiError::invalid(name, format!("invalid {name} {value:?}")))
}

fn state_of(store: &Store, id: &str) -> ApiResult<Arc<State>> {
    store
        .get(id)
        .map(|h| h.state())
        .ok_or_else(|| ApiError::not_found(format!("unknown project {id:?}")))
}

fn parse_cid(cid: &str) -> ApiResult<EntityId> {
    cid.parse().map_err(|_| ApiError::invalid("cid", format!("invalid character id {cid:?}")))
}

fn parse_subjects(raw: &str) -> ApiResult<Vec<Subject>> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Subject>().map_err(|e| ApiError::invalid("subjects", e.to_string())))
        .collect()
}

/// Live characters that have at least one mention, in id order.
fn mentioned(snapshot: &AnalysisSnapshot, registry: &Registry) -> Vec<Subject> {
    snapshot
        .entity_mentions
        .keys()
        .filter(|id| registry.get(**id).is_some_and(|r| r.is_live()))
        .map(|&id| Subject::Entity(id))
        .collect()
}

// ---- projects ----

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct NewProject {
    #[serde(default)]
    title: String,
    #[serde(default)]
    document: String,
    #[serde(default)]
    registry: Option<Registry>,
    #[serde(default)]
    settings: Option<Settings>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectUpdate {
    title: Option<String>,
    document: Option<String>,
    registry: Option<Registry>,
    settings: Option<Settings>,
}

#[derive(Serialize)]
struct ProjectBody<'a> {
    snapshot_version: u64,
    #[serde(flatten)]
    project: &'a Project,
}

fn project_response(state: &State) -> Json<serde_json::Value> {
    Json(
        serde_json::to_value(ProjectBody {
            snapshot_version: state.snapshot.snapshot_version,
            project: &state.project,
        })
        .expect("project serializes"),
    )
}

fn check_settings(settings: &Settings) -> ApiResult<()> {
    settings.validate().map_err(|(field, message)| ApiError::invalid(field, message))
}

async fn create_project(AxumState(store): AxumState<Arc<Store>>, bytes: Bytes) -> ApiResult<Response> {
    let new: NewProject = if bytes.is_empty() { NewProject::default() } else { body(&bytes)? };
    let mut project = Project::new(uuid::Uuid::new_v4().simple().to_string(), new.title, new.document);
    if let Some(registry) = new.registry {
        project.registry = registry;
    }
    if let Some(settings) = new.settings {
        check_settings(&settings)?;
        project.settings = settings;
    }
    let state = store.create(project)?;
    Ok((StatusCode::CREATED, project_response(&state)).into_response())
}

#[derive(Serialize)]
struct ProjectSummary {
    id: String,
    title: String,
}

async fn list_projects(AxumState(store): AxumState<Arc<Store>>) -> Json<Vec<ProjectSummary>> {
    Json(
        store
            .ids()
            .into_iter()
            .filter_map(|id| store.get(&id))
            .map(|h| {
                let s = h.state();
                ProjectSummary {
                    id: s.project.id.clone(),
                    title: s.project.title.clone(),
                }
            })
            .collect(),
    )
}

async fn get_project(AxumState(store): AxumState<Arc<Store>>, Path(id): Path<String>) -> ApiResult<Json<serde_json::Value>> {
    let state = state_of(&store, &id)?;
    Ok(project_response(&state))
}

async fn update_project(
    AxumState(store): AxumState<Arc<Store>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Json<serde_json::Value>> {
    let update: ProjectUpdate = body(&bytes)?;
    if let Some(settings) = &update.settings {
        check_settings(settings)?;
    }
    let (_, state, _) = store.mutate(&id, |draft, _| {
        let registry_replaced = update.registry.is_some();
        if let Some(title) = update.title {
            draft.title = title;
        }
        if let Some(document) = update.document {
            draft.document = document;
        }
        if let Some(registry) = update.registry {
            draft.registry = registry;
        }
        if let Some(settings) = update.settings {
            draft.settings = settings;
        }
        Ok::<_, ApiError>((
            (),
            AnalyzeRequest {
                delta: None,
                registry_replaced,
            },
        ))
    })?;
    Ok(project_response(&state))
}

async fn delete_project(AxumState(store): AxumState<Arc<Store>>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    if store.delete(&id)? {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::not_found(format!("unknown project {id:?}")))
    }
}

// ---- analysis ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyzeBody {
    document: String,
    #[serde(default)]
    delta: Option<Vec<DeltaOp>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewCharacter {
    pub id: EntityId,
    pub canonical_name: String,
}

#[derive(Serialize)]
struct AnalyzeResponse {
    snapshot_version: u64,
    #[serde(rename = "S")]
    sentence_count: usize,
    new_characters: Vec<NewCharacter>,
    changed_paragraphs: usize,
    pipeline_runs: usize,
    delta_hint: DeltaHint,
}

async fn analyze(
    AxumState(store): AxumState<Arc<Store>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Json<AnalyzeResponse>> {
    let request: AnalyzeBody = body(&bytes)?;
    let (_, state, outcome) = store.mutate(&id, |draft, _| {
        draft.document = request.document;
        Ok::<_, ApiError>((
            (),
            AnalyzeRequest {
                delta: request.delta,
                registry_replaced: false,
            },
        ))
    })?;
    let registry = &state.project.registry;
    Ok(Json(AnalyzeResponse {
        snapshot_version: state.snapshot.snapshot_version,
        sentence_count: state.snapshot.sentence_count,
        new_characters: outcome
            .promoted
            .iter()
            .filter_map(|id| registry.get(*id))
            .map(|r| NewCharacter {
                id: r.id,
                canonical_name: r.canonical_name.clone(),
            })
            .collect(),
        changed_paragraphs: outcome.changed_paragraphs.len(),
        pipeline_runs: outcome.pipeline_runs,
        delta_hint: outcome.delta_hint,
    }))
}

// ---- characters and schema ----

#[derive(Serialize)]
struct CharacterView<'a> {
    #[serde(flatten)]
    record: &'a CharacterRecord,
    mentions: usize,
}

#[derive(Serialize)]
struct CharactersResponse<'a> {
    snapshot_version: u64,
    characters: Vec<CharacterView<'a>>,
}

fn character_list(state: &State) -> Json<serde_json::Value> {
    let characters = state
        .project
        .registry
        .live()
        .map(|record| CharacterView {
            record,
            mentions: state.snapshot.entity_mentions.get(&record.id).map_or(0, Vec::len),
        })
        .collect();
    Json(
        serde_json::to_value(CharactersResponse {
            snapshot_version: state.snapshot.snapshot_version,
            characters,
        })
        .expect("characters serialize"),
    )
}

async fn characters(AxumState(store): AxumState<Arc<Store>>, Path(id): Path<String>) -> ApiResult<Json<serde_json::Value>> {
    let state = state_of(&store, &id)?;
    Ok(character_list(&state))
}

/// Applies a registry edit and answers with the refreshed character list.
fn registry_edit(
    store: &Store,
    id: &str,
    edit: impl FnOnce(&mut Project) -> ApiResult<()>,
) -> ApiResult<Json<serde_json::Value>> {
    let (_, state, _) = store.mutate(id, |draft, _| edit(draft).map(|()| ((), AnalyzeRequest::default())))?;
    Ok(character_list(&state))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MergeBody {
    target: EntityId,
    source: EntityId,
}

async fn merge(
    AxumState(store): AxumState<Arc<Store>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Json<serde_json::Value>> {
    let m: MergeBody = body(&bytes)?;
    registry_edit(&store, &id, |p| Ok(p.registry.merge(m.target, m.source)?))
}

async fn delete_character(
    AxumState(store): AxumState<Arc<Store>>,
    Path((id, cid)): Path<(String, String)>,
) -> ApiResult<Json<serde_json::Value>> {
    let cid = parse_cid(&cid)?;
    registry_edit(&store, &id, |p| Ok(p.registry.delete(cid)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManualBody {
    surface: String,
    start: usize,
    end: usize,
}

async fn add_manual(
    AxumState(store): AxumState<Arc<Store>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let m: ManualBody = body(&bytes)?;
    let json = registry_edit(&store, &id, |p| {
        let document = p.document.clone();
        p.registry.add_manual(&document, &m.surface, Span::new(m.start, m.end))?;
        Ok(())
    })?;
    Ok((StatusCode::CREATED, json).into_response())
}

async fn demographics(
    AxumState(store): AxumState<Arc<Store>>,
    Path((id, cid)): Path<(String, String)>,
    bytes: Bytes,
) -> ApiResult<Json<serde_json::Value>> {
    let cid = parse_cid(&cid)?;
    let assignments: BTreeMap<String, Option<String>> = body(&bytes)?;
    registry_edit(&store, &id, |p| {
        for (dimension, category) in &assignments {
            p.registry
                .assign(cid, dimension, category.as_deref())
                .map_err(|e| ApiError::from(e).with_field(dimension.clone()))?;
        }
        Ok(())
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemaBody {
    dimension: String,
    #[serde(default)]
    category: Option<String>,
}

async fn extend_schema(
    AxumState(store): AxumState<Arc<Store>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Json<IdentitySchema>> {
    let s: SchemaBody = body(&bytes)?;
    let (_, state, _) = store.mutate(&id, |draft, _| {
        draft.registry.extend_schema(&s.dimension, s.category.as_deref())?;
        Ok::<_, ApiError>(((), AnalyzeRequest::default()))
    })?;
    Ok(Json(state.project.registry.schema.clone()))
}

async fn get_schema(AxumState(store): AxumState<Arc<Store>>, Path(id): Path<String>) -> ApiResult<Json<IdentitySchema>> {
    Ok(Json(state_of(&store, &id)?.project.registry.schema.clone()))
}

// ---- analytics ----

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    snapshot_version: u64,
    #[serde(flatten)]
    body: T,
}

fn versioned<T: Serialize>(state: &State, body: T) -> Json<Versioned<T>> {
    Json(Versioned {
        snapshot_version: state.snapshot.snapshot_version,
        body,
    })
}

fn aggregate_param(params: &Params, settings: &Settings) -> ApiResult<Aggregate> {
    params
        .get("aggregate")
        .map_or(Ok(settings.aggregate_mode), |v| parse_enum("aggregate", v))
}

async fn get_timeline(
    AxumState(store): AxumState<Arc<Store>>,
    Path(id): Path<String>,
    query: Result<Query<BTreeMap<String, String>>, QueryRejection>,
) -> ApiResult<Json<Versioned<Timeline>>> {
    let params = Params::new(query, &["mode", "order", "aggregate", "dimension", "groups"])?;
    let state = state_of(&store, &id)?;
    let settings = &state.project.settings;
    let mode = match params.get("mode").unwrap_or("characters") {
        "characters" => TimelineMode::Characters,
        "identity" => TimelineMode::Identity(
            params
                .get("dimension")
                .ok_or_else(|| ApiError::invalid("dimension", "identity mode needs a dimension"))?
                .to_string(),
        ),
        "groups" => TimelineMode::Groups(
            params
                .get("groups")
                .ok_or_else(|| ApiError::invalid("groups", "groups mode needs groups"))?
                .split(',')
                .map(|g| g.parse::<GroupKey>().map_err(|e| ApiError::invalid("groups", e.to_string())))
                .collect::<ApiResult<_>>()?,
        ),
        other => return Err(ApiError::invalid("mode", format!("invalid mode {other:?}"))),
    };
    let order: SortOrder = params
        .get("order")
        .map_or(Ok(settings.sort_order), |v| parse_enum("order", v))?;
    let aggregate = aggregate_param(&params, settings)?;
    let t = timeline(&state.snapshot, &state.project.registry, &mode, order, aggregate)?;
    Ok(versioned(&state, t))
}

async fn get_impact(
    AxumState(store): AxumState<Arc<Store>>,
    Path((id, subject)): Path<(String, String)>,
    query: Result<Query<BTreeMap<String, String>>, QueryRejection>,
) -> ApiResult<Json<Versioned<ImpactGraph>>> {
    let params = Params::new(query, &["min"])?;
    let state = state_of(&store, &id)?;
    let focus: Subject = subject.parse().map_err(|e: RegistryError| ApiError::invalid("subject", e.to_string()))?;
    let min = params.parse::<usize>("min")?.unwrap_or(state.project.settings.min_edge_count);
    if min == 0 {
        return Err(ApiError::invalid("min", "min must be at least 1"));
    }
    let graph = impact_graph(&state.snapshot, &state.project.registry, &focus, min)?;
    Ok(versioned(&state, graph))
}

#[derive(Serialize)]
struct ZonesBody {
    zones: Vec<WordZone>,
}

async fn get_wordzones(
    AxumState(store): AxumState<Arc<Store>>,
    Path(id): Path<String>,
    query: Result<Query<BTreeMap<String, String>>, QueryRejection>,
) -> ApiResult<Json<Versioned<ZonesBody>>> {
    let params = Params::new(query, &["subjects", "pos", "k"])?;
    let state = state_of(&store, &id)?;
    let subjects = match params.get("subjects") {
        Some(raw) => parse_subjects(raw)?,
        None => mentioned(&state.snapshot, &state.project.registry),
    };
    if subjects.is_empty() {
        return Err(ApiError::invalid("subjects", "no subjects to describe"));
    }
    let pos: PosFilter = params
        .get("pos")
        .map_or(Ok(PosFilter::Both), |v| v.parse().map_err(|_| ApiError::invalid("pos", format!("invalid pos {v:?}"))))?;
    let k = params.parse::<usize>("k")?.unwrap_or(state.project.settings.word_zone_k);
    if k == 0 {
        return Err(ApiError::invalid("k", "k must be at least 1"));
    }
    let zones = word_zone(&state.snapshot, &state.project.registry, &subjects, pos, k)?;
    Ok(versioned(&state, ZonesBody { zones }))
}

#[derive(Serialize)]
struct PairsBody {
    pairs: Vec<CandidatePair>,
}

async fn get_candidates(
    AxumState(store): AxumState<Arc<Store>>,
    Path(id): Path<String>,
    query: Result<Query<BTreeMap<String, String>>, QueryRejection>,
) -> ApiResult<Json<Versioned<PairsBody>>> {
    let params = Params::new(query, &["top_n", "subjects", "min_words"])?;
    let state = state_of(&store, &id)?;
    let table = store.embeddings().ok_or_else(|| {
        ApiError::new(
            StatusCode::CONFLICT,
            "no_embeddings",
            "no embedding table is loaded; start the server with --embeddings FILE or set STORYSCOPE_EMBEDDINGS",
        )
    })?;
    let subjects = match params.get("subjects") {
        Some(raw) => parse_subjects(raw)?,
        None => mentioned(&state.snapshot, &state.project.registry),
    };
    let top_n = params.parse::<usize>("top_n")?.unwrap_or(state.project.settings.top_n_pairs);
    if top_n == 0 {
        return Err(ApiError::invalid("top_n", "top_n must be at least 1"));
    }
    let min_words = params.parse::<usize>("min_words")?.unwrap_or(MIN_EMBEDDED_WORDS);
    let pairs = candidate_pairs(&state.snapshot, &state.project.registry, table, &subjects, top_n, min_words)?;
    Ok(versioned(&state, PairsBody { pairs }))
}

#[derive(Serialize)]
struct Passage {
    #[serde(flatten)]
    range: BinRange,
    start: usize,
    end: usize,
    text: String,
}

async fn get_passage(
    AxumState(store): AxumState<Arc<Store>>,
    Path(id): Path<String>,
    query: Result<Query<BTreeMap<String, String>>, QueryRejection>,
) -> ApiResult<Json<Versioned<Passage>>> {
    let params = Params::new(query, &["bin", "aggregate"])?;
    let state = state_of(&store, &id)?;
    let bin = params
        .parse::<usize>("bin")?
        .ok_or_else(|| ApiError::invalid("bin", "bin is required"))?;
    let aggregate = aggregate_param(&params, &state.project.settings)?;
    let t = timeline(
        &state.snapshot,
        &state.project.registry,
        &TimelineMode::Groups(Vec::new()),
        SortOrder::Desc,
        aggregate,
    )?;
    debug_assert_eq!(t.bin_count, bin_count(state.snapshot.sentence_count, aggregate));
    let range = *t
        .bins
        .get(bin)
        .ok_or_else(|| ApiError::invalid("bin", format!("bin {bin} is out of range (0..{})", t.bins.len())))?;
    let span = state
        .snapshot
        .sentence_range_span(range.first_sentence, range.last_sentence)
        .expect("bin ranges cover existing sentences");
    Ok(versioned(
        &state,
        Passage {
            range,
            start: span.start,
            end: span.end,
            text: slice_chars(&state.project.document, span).to_string(),
        },
    ))
}
