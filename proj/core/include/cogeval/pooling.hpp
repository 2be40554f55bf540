#pragma once

#include <string_view>

#include "cogeval/feature_matrix.hpp"

namespace cogeval {

enum class PoolingKind { Mean, Sum };

std::string_view to_string(PoolingKind kind);
PoolingKind parse_pooling(std::string_view name);

/// Collapses frames (rows) into one 1 x dim row. Accumulates in double
/// with pairwise summation. Throws PreconditionError on a 0-row matrix.
FeatureMatrix pool(const FeatureMatrix& matrix, PoolingKind kind);

/// Number of 20 ms frame vectors the audio encoder emits for a clip of
/// `duration_s` seconds: floor(T / 0.02) - 1. Requires T > 0.02.
long expected_frame_count(double duration_s);

/// Tolerance, in frames, the extractor's output may deviate from expected_frame_count.
inline constexpr long kFrameCountTolerance = 2;

}  // namespace cogeval
