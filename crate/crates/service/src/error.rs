use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;
use thiserror::Error;

use teachlab_core::{Cell, TeachError};

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),

    #[error("no session {0}")]
    NotFound(String),

    #[error("session {0} is no longer active")]
    Inactive(String),

    #[error("{0}")]
    Conflict(String),

    #[error("the hypothesis disagrees with {} revealed cell(s)", .0.len())]
    Inconsistent(Vec<Cell>),

    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Inactive(_) | ApiError::Conflict(_) => StatusCode::CONFLICT,
            ApiError::Inconsistent(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<TeachError> for ApiError {
    fn from(e: TeachError) -> Self {
        match e {
            TeachError::Unsupported(_) | TeachError::Config(_) | TeachError::Domain(_) | TeachError::OutOfBounds { .. } => {
                ApiError::BadRequest(e.to_string())
            }
            other => ApiError::Internal(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = match &self {
            ApiError::Inconsistent(cells) => json!({ "error": self.to_string(), "violating_cells": cells }),
            _ => json!({ "error": self.to_string() }),
        };
        (self.status(), Json(body)).into_response()
    }
}
