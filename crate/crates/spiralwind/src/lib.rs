// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! File formats, SVG rendering and the `spiralwind` command line on top of
//! `spiralwind-core`.

pub mod cli;
pub mod error;
pub mod io;
pub mod spec;
pub mod svg;

pub use error::{CliError, CliResult};
