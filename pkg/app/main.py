"""
Main FastAPI application entry point.
"""
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.config import settings
from app.repositories.root_system_repository import root_system_repository
from app.routes import charge_routes, linkage_routes, root_system_routes, shapovalov_routes
import logging

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.log_level.upper(), logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)

logger = logging.getLogger(__name__)

app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="Exact Kac-Kazhdan linkage, blocks and Shapovalov oracle for affine Lie algebras",
    docs_url="/swagger",
    redoc_url="/redoc"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(root_system_routes.router)
app.include_router(linkage_routes.router)
app.include_router(charge_routes.router)
app.include_router(shapovalov_routes.router)


@app.on_event("startup")
async def startup_event():
    """
    Warm the root-system cache with the rank-one and rank-two types
    used by most requests.
    """
    logger.info("Starting application initialization...")
    try:
        for code in ("A1", "A2", "B2", "G2"):
            root_system_repository.find_by_code(code)
        logger.info("Root systems ready: %s", [rs.code for rs in root_system_repository.find_all_cached()])
    except Exception as e:
        logger.error("Error during application startup: %s", e, exc_info=True)
        raise


@app.get("/")
async def root():
    """
    Root endpoint for health check.

    Returns:
        Welcome message and API information
    """
    return {
        "message": f"Welcome to {settings.app_name}",
        "version": settings.app_version,
        "status": "running",
        "docs": "/swagger"
    }


@app.get("/health")
async def health_check():
    """Health status."""
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "app.main:app",
        host=settings.api_host,
        port=settings.api_port,
        reload=settings.debug
    )
