#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EqualPoints : Error {
    EqualPoints() : Error("line_through: the two points are equal") {}
};

struct PointAtInfinity : Error {
    explicit PointAtInfinity(std::size_t id)
        : Error("apply_map: point " + std::to_string(id) + " maps to the line at infinity"),
          point_id(id) {}
    std::size_t point_id;
};

struct LineAtInfinity : Error {
    explicit LineAtInfinity(std::size_t id)
        : Error("apply_map: line " + std::to_string(id) + " maps to the line at infinity"),
          line_id(id) {}
    std::size_t line_id;
};

struct NotIncident : Error {
    explicit NotIncident(std::size_t id)
        : Error("sort_along_line: point " + std::to_string(id) + " is not on the line"),
          point_id(id) {}
    std::size_t point_id;
};

struct UnknownId : Error {
    explicit UnknownId(std::size_t id)
        : Error("unknown ground id " + std::to_string(id)), id(id) {}
    std::size_t id;
};

struct BadExponents : Error {
    using Error::Error;
};

struct KernelViolation : Error {
    KernelViolation(std::size_t field, std::size_t row)
        : Error("projective field " + std::to_string(field) +
                " is not annihilated by constraint row " + std::to_string(row)),
          field_index(field), row_index(row) {}
    std::size_t field_index;
    std::size_t row_index;
};

struct CompositionUnjustified : Error {
    CompositionUnjustified()
        : Error("compose_rigidity: closure uniqueness certificate missing") {}
};

struct UncoveredPoint : Error {
    explicit UncoveredPoint(std::string ids)
        : Error("dual transfer requires every point on >= 2 lines; uncovered: " + ids) {}
};

struct LineInZeroSet : Error {
    explicit LineInZeroSet(std::size_t level)
        : Error("line lies inside the zero set of partition factor " + std::to_string(level)),
          level(level) {}
    std::size_t level;
};

struct PartitionFailure : Error {
    explicit PartitionFailure(std::size_t level, const std::string& why)
        : Error("partition failed at level " + std::to_string(level) + ": " + why),
          level(level) {}
    std::size_t level;
};

struct NoGoodCells : Error {
    NoGoodCells() : Error("greedy_select: no good cells available") {}
};

struct SchemaMismatch : Error {
    using Error::Error;
};

struct RankUncertified : Error {
    using Error::Error;
};

}  // namespace stlab
