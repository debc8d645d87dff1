#pragma once

#include <memory>

#include "ndsort/archive.hpp"

namespace ndsort::detail {

std::unique_ptr<ConcurrentArchive> make_sequential_archive(
    const ArchiveConfig& config, std::vector<Point> initial);
std::unique_ptr<ConcurrentArchive> make_globallock_archive(
    const ArchiveConfig& config, std::vector<Point> initial);
std::unique_ptr<ConcurrentArchive> make_cas_archive(const ArchiveConfig& config,
                                                    std::vector<Point> initial);
std::unique_ptr<ConcurrentArchive> make_levellock_archive(
    const ArchiveConfig& config, std::vector<Point> initial);

}  // namespace ndsort::detail
