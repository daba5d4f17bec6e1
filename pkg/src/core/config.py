from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Encoding limits
    max_ground_set: int = 64

    # Enumeration caps (desk scale)
    covector_gamma_cap: int = 20
    closure_max_free: int = 20
    face_enum_max_forms: int = 10
    convex_max_dimension: int = 3
    homology_max_faces: int = 200000
    flag_table_max_flats: int = 12
    face_cache_size: int = 256

    # Application
    debug_checks: bool = False
    log_level: str = "WARNING"

    class Config:
        env_file = ".env"
        env_prefix = "GREEDOID_"


settings = Settings()
