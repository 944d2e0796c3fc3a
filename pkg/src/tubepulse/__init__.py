"""Trending-video view prediction and trend-boosted ranking toolkit."""

from .errors import (
    DegenerateSeriesError,
    EmptyDatasetError,
    FormatError,
    InsufficientDataError,
    ModelLoadError,
    OrderingError,
    ParameterError,
    ProfileMismatchError,
    SchemaError,
    ShapeError,
    TubepulseError,
)
from .ingest import (
    IngestReport,
    VideoRecord,
    format_tags,
    parse_csv,
    parse_tags,
    parse_timestamp,
    records_to_csv,
)
from .features import (
    Draft,
    FeatureMatrix,
    FeatureProfile,
    FeatureVector,
    POST_UPLOAD,
    PRE_UPLOAD,
    build_matrix,
    featurize,
    infer_profile,
    profile_by_name,
    time_deltas,
)
from .eda import (
    CorrelationMatrix,
    OutlierReport,
    correlation_matrix,
    iqr_outliers,
    pearson,
    remove_outliers,
    threshold_pairs,
)
from .trees import SplitRule, TreeNode, TreeParams, best_split, fit_tree, predict_tree
from .ensemble import BoostParams, ForestParams, fit_boosted, fit_forest, fit_tree_model
from .model import (
    KIND_BOOSTED,
    KIND_FOREST,
    KIND_TREE,
    RegressionModel,
    load_model,
    predict,
    predict_rows,
    save_model,
)
from .evaluation import (
    MetricSet,
    ScoreReport,
    SplitIndices,
    evaluate,
    mape,
    r2,
    render_reports,
    rmse,
    score_model,
    train_and_score,
    train_test_split,
)
from .trendrank import (
    EmbeddingTable,
    MatchReport,
    RankReport,
    TrendingTopics,
    cosine,
    keyword_text,
    load_embeddings,
    load_topics,
    match_score,
    phrase_vector,
    rank_score,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
