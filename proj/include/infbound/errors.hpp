#pragma once

#include <stdexcept>
#include <string>

namespace infbound {

struct SelfLoopError : std::invalid_argument {
    explicit SelfLoopError(int node)
        : std::invalid_argument("self-loop at node " + std::to_string(node)) {}
};

struct DuplicateEdgeError : std::invalid_argument {
    DuplicateEdgeError(int src, int dst)
        : std::invalid_argument("duplicate directed edge (" + std::to_string(src) + "," +
                                std::to_string(dst) + ")") {}
};

struct ProbOutOfRangeError : std::invalid_argument {
    explicit ProbOutOfRangeError(double p)
        : std::invalid_argument("transmission probability " + std::to_string(p) +
                                " outside [0,1]") {}
};

struct EmptySeedSetError : std::invalid_argument {
    EmptySeedSetError() : std::invalid_argument("seed set is empty") {}
};

struct IndexOutOfRangeError : std::invalid_argument {
    IndexOutOfRangeError(int idx, int n)
        : std::invalid_argument("node index " + std::to_string(idx) + " outside [0," +
                                std::to_string(n) + ")") {}
};

struct ParseError : std::runtime_error {
    int line_no;
    ParseError(int line, const std::string& what)
        : std::runtime_error("parse error at line " + std::to_string(line) + ": " + what),
          line_no(line) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error("io error: " + what) {}
};

struct TooManyEdgesError : std::runtime_error {
    int cap;
    int edges;
    TooManyEdgesError(int edge_count, int edge_cap)
        : std::runtime_error("state enumeration over " + std::to_string(edge_count) +
                             " edges exceeds cap " + std::to_string(edge_cap)),
          cap(edge_cap), edges(edge_count) {}
};

struct InvalidBoundsError : std::invalid_argument {
    InvalidBoundsError(double up, double lo)
        : std::invalid_argument("upper bound " + std::to_string(up) + " below lower bound " +
                                std::to_string(lo)) {}
};

struct InvalidHorizonError : std::invalid_argument {
    explicit InvalidHorizonError(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidParamsError : std::invalid_argument {
    explicit InvalidParamsError(const std::string& what) : std::invalid_argument(what) {}
};

struct GenerationFailureError : std::runtime_error {
    explicit GenerationFailureError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace infbound
