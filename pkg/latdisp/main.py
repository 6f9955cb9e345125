"""
latdisp - HTTP API

This module initializes and configures the FastAPI application that exposes the
exact dispersion computations over HTTP.

Features:
- Parsing and certified comparison of quadratic numbers
- Continued fraction expansions and dispersion of coefficient sequences
- Closed-form dispersion of quadratic lattices and coefficient bounds
- Rank-1 lattices, Fibonacci lattices and the Zaremba scan
"""

import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from . import __version__, config
from .routes.fields import fields_router
from .routes.rings import bounds_router, rings_router
from .routes.sequences import sequences_router
from .routes.torus import torus_router

logger = logging.getLogger(__name__)

config.configure_logging()

# Initialize FastAPI application
app = FastAPI(
    title="latdisp API",
    description="Exact dispersion of two-dimensional lattices",
    version=__version__,
)

# Register routes
app.include_router(fields_router)
app.include_router(sequences_router)
app.include_router(rings_router)
app.include_router(bounds_router)
app.include_router(torus_router)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET", "POST"],
    allow_headers=["*"],
)


@app.get("/")
def root():
    return {"message": "latdisp API running"}
