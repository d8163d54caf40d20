#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "meanfield/config.hpp"

namespace meanfield {

struct RunArtifacts {
    std::vector<std::string> files;  // paths of the data files written
    std::string manifest_path;       // written last, after all data files
};

// execute a finite / density / scan / renorm run, writing CSV outputs and a
// JSON manifest (config echo, tool version, seed, timestamps, file digests)
// into cfg.out_dir. progress notes go to log.
RunArtifacts execute_run(const RunConfig& cfg, std::ostream& log);

// worker count for row-parallel work: MEANFIELD_WORKERS if set, else 1
std::size_t worker_count();

}  // namespace meanfield
