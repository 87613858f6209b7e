#ifndef ROLECHRON_DATASET_HPP
#define ROLECHRON_DATASET_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rolechron/graph.hpp"

namespace rolechron {

struct WindowSpec {
  int index = 1;                    // T1, T2, ...
  std::vector<std::string> months;  // YYYY-MM
};

/// Subreddit class labels and the window partition of the months.
///
///   [subreddits]
///   ACMilan = loyal
///   CityPorn = vagrant
///
///   [windows]
///   T1 = 2014-02 2014-03 2014-04
///   T2 = 2014-05 2014-06 2014-07
struct Manifest {
  std::map<std::string, ClassLabel> subreddits;
  std::vector<WindowSpec> windows;  // ascending index
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// `<root>/<subreddit>/<YYYY-MM>.edges`
std::filesystem::path month_path(const std::filesystem::path& root, const std::string& subreddit,
                                 const std::string& month);

TemporalSnapshot load_month(const std::filesystem::path& root, const std::string& subreddit,
                            const std::string& month, ClassLabel label);

/// One merged snapshot per manifest window. Throws if a month file is missing
/// or malformed.
std::vector<TemporalSnapshot> load_windows(const std::filesystem::path& root, const std::string& subreddit,
                                           ClassLabel label, const std::vector<WindowSpec>& windows);

}  // namespace rolechron

#endif
