import json
import os
import logging

import config
from errors import ParseError
from services.number_core import make_context

logger = logging.getLogger(__name__)

# Cache for the named contexts
_catalog_cache = None

# Used when data/contexts.json is missing
DEFAULT_CATALOG = {
    "golden": {"spec": "digits=1,1", "description": "golden ratio", "class": "sft"},
    "silver": {"spec": "digits=2,1", "description": "1 + sqrt(2)", "class": "sft"},
    "tribonacci": {"spec": "digits=1,1,1", "description": "tribonacci constant", "class": "sft"},
    "two_plus_sqrt3": {"spec": "digits=3,(2)", "description": "2 + sqrt(3)", "class": "sofic"},
    "golden_squared": {"spec": "digits=2,(1)", "description": "golden ratio squared", "class": "sofic"},
    "full2": {"spec": "digits=2", "description": "full 2-shift", "class": "sft"},
    "full3": {"spec": "digits=3", "description": "full 3-shift", "class": "sft"},
    "three_halves": {"spec": "rational=3/2", "description": "3/2", "class": "unknown"},
}


def get_catalog():
    """
    Get the named example contexts

    Returns:
        dict: name -> {"spec", "description", "class"}
    """
    global _catalog_cache

    if _catalog_cache:
        return _catalog_cache

    try:
        if os.path.exists(config.CATALOG_FILE):
            with open(config.CATALOG_FILE, 'r', encoding='utf-8') as f:
                _catalog_cache = json.load(f)
                return _catalog_cache

        logger.debug(f"{config.CATALOG_FILE} not found, using the built-in catalog")
        _catalog_cache = DEFAULT_CATALOG
        return _catalog_cache

    except (OSError, ValueError) as e:
        logger.error(f"Error loading catalog: {str(e)}")
        return DEFAULT_CATALOG


def resolve_beta(text):
    """Expand "@name" into the catalog's beta-spec; other strings pass through"""
    if not text or not text.startswith('@'):
        return text
    name = text[1:]
    entry = get_catalog().get(name)
    if entry is None:
        raise ParseError(f"Unknown catalog entry: {name}", name=name, known=sorted(get_catalog()))
    return entry['spec']


def context_from_catalog(name):
    """
    Build the context of a catalog entry

    Args:
        name (str): entry name, with or without a leading "@"

    Returns:
        BetaContext: the shared context
    """
    return make_context(resolve_beta('@' + name.lstrip('@')))


def load_table_file(path):
    """Read a Table JSON document from a path or from data/tables by name"""
    if not os.path.exists(path):
        candidate = os.path.join(config.TABLES_DIR, path if path.endswith('.json') else f"{path}.json")
        if os.path.exists(candidate):
            path = candidate
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)
