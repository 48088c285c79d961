#pragma once

#include <stdexcept>
#include <string>

#include "mvd/geometry.hpp"

namespace mvd {

/// Two records carry identical coordinates. Duplicates are rejected at
/// ingestion, never silently deduplicated.
class DuplicatePointError : public std::invalid_argument {
public:
    DuplicatePointError(PointId existing, PointId incoming, Point p)
        : std::invalid_argument("duplicate coordinates (" + std::to_string(p.x) +
                                ", " + std::to_string(p.y) + "): point id " +
                                std::to_string(incoming) +
                                " collides with existing id " +
                                std::to_string(existing)),
          existing_id(existing),
          incoming_id(incoming),
          point(p) {}

    PointId existing_id;
    PointId incoming_id;
    Point point;
};

class UnknownPointError : public std::invalid_argument {
public:
    explicit UnknownPointError(PointId id)
        : std::invalid_argument("unknown point id " + std::to_string(id)), id(id) {}

    PointId id;
};

class IdCollisionError : public std::invalid_argument {
public:
    explicit IdCollisionError(PointId id, const std::string& why)
        : std::invalid_argument("point id " + std::to_string(id) + ": " + why),
          id(id) {}

    PointId id;
};

class EmptyIndexError : public std::logic_error {
public:
    explicit EmptyIndexError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mvd
