#pragma once

#include "flecscope/plane_curves.hpp"

#include <string>

namespace flecscope {

enum class JobMode { surface, ide, family_scan, ide_family_scan, cone, portrait };

struct JobConfig {
    std::string input_path;
    JobMode mode = JobMode::surface;
    Window2 window{-1, 1, -1, 1};
    int res = 512;
    double tol = 1e-10;
    double eps_a = 0, eps_b = 0;
    bool eps_given = false, eps_range = false;
    double p_lo = -4, p_hi = 4;
    std::string chart = "both";  // p | q | both
    std::string out_path;        // empty = stdout
    std::string format = "svg";  // svg | csv | json
};

// Exit status: 0 success, 1 I/O or parse error, 2 classification refusal.
int run(const JobConfig& cfg);

}  // namespace flecscope
