#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/docs.hpp"

namespace scriptorium::geo {

using docs::PlaceSource;

struct GazetteerRecord {
  PlaceSource source = PlaceSource::geonames;
  std::string external_id;
  std::string name;
  double lat = 0;
  double lon = 0;
  std::string kind;

  docs::ExternalPlace to_place() const { return {source, external_id, lat, lon}; }
  bool operator==(const GazetteerRecord&) const = default;
};

/// Throws unknown_source.
PlaceSource parse_source(std::string_view s);

class Gazetteer {
 public:
  virtual ~Gazetteer() = default;
  /// Candidates for `name`, most relevant first.
  virtual std::vector<GazetteerRecord> lookup(std::string_view name, PlaceSource source) = 0;
};

/// Offline table: `source\texternalId\tname\tlat\tlon\tkind` per line.
class FixtureGazetteer : public Gazetteer {
 public:
  explicit FixtureGazetteer(std::vector<GazetteerRecord> records);
  static FixtureGazetteer parse(std::string_view tsv);
  static FixtureGazetteer load(const std::filesystem::path& file);

  /// Accent- and case-insensitive. Exact name matches rank first, then prefix, then substring; ties by id.
  std::vector<GazetteerRecord> lookup(std::string_view name, PlaceSource source) override;
  size_t size() const noexcept { return records_.size(); }

 private:
  std::vector<GazetteerRecord> records_;
};

struct LiveConfig {
  std::string geonames_user;
  std::string geonames_host = "http://api.geonames.org";
  std::string tgn_endpoint;  // SPARQL endpoint, http://host[:port]/path
  std::chrono::milliseconds min_interval{1000};
  std::chrono::seconds timeout{10};
  size_t max_rows = 10;
};

/// Thin adapters over the public services. One retry per request; calls to
/// one source are spaced by `min_interval`.
class LiveGazetteer : public Gazetteer {
 public:
  explicit LiveGazetteer(LiveConfig config);
  std::vector<GazetteerRecord> lookup(std::string_view name, PlaceSource source) override;

 private:
  std::string fetch(const std::string& base, const std::string& path_and_query, PlaceSource source);
  void throttle(PlaceSource source);

  LiveConfig config_;
  std::mutex mutex_;
  std::map<PlaceSource, std::chrono::steady_clock::time_point> last_call_;
};

std::vector<GazetteerRecord> parse_geonames_json(std::string_view body);
std::vector<GazetteerRecord> parse_tgn_sparql_json(std::string_view body);

enum class Mode { fixture, live };

struct GeoConfig {
  Mode mode = Mode::fixture;
  std::filesystem::path fixture_file;
  LiveConfig live;

  /// GEO_MODE (fixture|live), GEONAMES_USER, TGN_ENDPOINT.
  static GeoConfig from_env(std::filesystem::path fixture_file);
};

/// Front door used by the API: argument checks plus the configured backend.
class GeoClient {
 public:
  explicit GeoClient(std::unique_ptr<Gazetteer> backend);
  static GeoClient from_config(const GeoConfig& config);

  /// Throws empty_name or unknown_source before any backend call.
  std::vector<GazetteerRecord> lookup(std::string_view name, std::string_view source);

 private:
  std::unique_ptr<Gazetteer> backend_;
};

}  // namespace scriptorium::geo
