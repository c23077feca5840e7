//! Library half of the CLI: file schemas and SVG rendering.
