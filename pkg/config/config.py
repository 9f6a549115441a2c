"""
Configuration settings for the E2 homology workbench
"""

import os

from dotenv import load_dotenv

# Exported variables win over .env values
load_dotenv(override=False)


def _env_int(name: str, default: int) -> int:
    return int(os.environ.get(name, default))


class Config:
    """Main configuration class"""

    ARTIFACT_VERSION = '0.3.0'
    SCHEMA_VERSION = '1.0'

    # Size caps
    RING_SIZE_CAP = _env_int('E2HOMLAB_CAP', 4096)
    GROUP_SIZE_CAP = _env_int('E2HOMLAB_GROUP_CAP', 50000)
    BASIS_SIZE_CAP = _env_int('E2HOMLAB_BASIS_CAP', 40000)
    ENUMERATION_CAP = _env_int('E2HOMLAB_MATRIX_CAP', 600000)
    MAX_DEGREE = _env_int('E2HOMLAB_DEGREE', 4)

    # Check suite
    DEFAULT_JOBS = _env_int('E2HOMLAB_JOBS', 1)
    RANDOM_SEED = _env_int('E2HOMLAB_SEED', 2024)
    BAR_SAMPLES = _env_int('E2HOMLAB_SAMPLES', 500)

    # Results store (disabled when empty)
    DATABASE_PATH = os.environ.get('E2HOMLAB_DB', '')

    # Logging settings
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    LOG_FILE = os.environ.get('LOG_FILE', '')
    LOG_MAX_BYTES = _env_int('LOG_MAX_BYTES', 10485760)  # 10MB
    LOG_BACKUP_COUNT = _env_int('LOG_BACKUP_COUNT', 5)

    class Families:
        FIELDS_SMALL = ['GF(2)', 'GF(3)', 'GF(4)', 'GF(5)', 'GF(7)', 'GF(8)', 'GF(9)']
        LOCAL_CHAR2 = ['Z/4', 'Z/8', 'F2[t]/t^2']
        LOCAL_ODD = ['Z/9', 'Z/25', 'Z/27']
        PRODUCTS = ['Z/6', 'Z/12', 'Z/2 x Z/2', 'GF(4) x GF(5)']

    @classmethod
    def families(cls) -> dict:
        """Built-in ring families in suite order"""
        return {
            'fields-small': list(cls.Families.FIELDS_SMALL),
            'local-char2': list(cls.Families.LOCAL_CHAR2),
            'local-odd': list(cls.Families.LOCAL_ODD),
            'products': list(cls.Families.PRODUCTS),
        }


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = 'DEBUG'


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    RING_SIZE_CAP = 256
    GROUP_SIZE_CAP = 20000
    BASIS_SIZE_CAP = 5000
    BAR_SAMPLES = 50


# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'default': Config
}
