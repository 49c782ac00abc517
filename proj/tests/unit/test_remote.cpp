#include <atomic>
#include <chrono>
#include <thread>

#include "test_support.hpp"
#include "spillover/dataio.hpp"
#include "spillover/remote.hpp"

// Eigen comes in through the headers above; <resolv.h> from httplib must follow it.
#include <httplib.h>

using namespace spillover;

namespace {

// Local stand-in for the economic-data endpoint, serving /series/<id>.csv.
class FakeEndpoint {
 public:
  FakeEndpoint() {
    server_.Get(R"(/series/(\w+)\.csv)", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      last_key_ = req.get_param_value("api_key");
      const auto id = req.matches[1].str();
      if (id == "TWOROWS") {
        res.set_content("date,value\n2021-01-01,1.5\n2021-02-01,1.75\n", "text/csv");
      } else if (id == "FIXTURE") {
        res.set_content(testing::slurp(std::filesystem::path(SPILLOVER_FIXTURE_DIR) / "remote_missing_marker.csv"),
                        "text/csv");
      } else if (id == "FLAKY") {
        if (hits_ < 3) {
          res.status = 503;
        } else {
          res.set_content("date,value\n2021-01,2\n", "text/csv");
        }
      } else if (id == "DOWN") {
        res.status = 500;
      } else if (id == "FORBIDDEN") {
        res.status = 403;
      } else if (id == "GARBAGE") {
        res.set_content("<html>oops</html>", "text/html");
      } else {
        res.status = 404;
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/series/{series_id}.csv?api_key={api_key}";
  }
  int hits() const { return hits_; }
  std::string last_key() const { return last_key_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::string last_key_;
};

}  // namespace

TEST_CASE("two-row payload parses to two rows") {
  FakeEndpoint srv;
  const auto s = fetch_remote_series(srv.endpoint(), "TWOROWS", "secret");
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0].date == Day{2021, 1, 1});
  CHECK(s.rows[1].value == 1.75);
  CHECK(s.skipped_missing == 0);
  CHECK(srv.last_key() == "secret");
}

TEST_CASE("404 is a named not-found error without the key in the message") {
  FakeEndpoint srv;
  try {
    fetch_remote_series(srv.endpoint(), "NOSUCH", "secret");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_found);
    CHECK(std::string(e.what()).find("secret") == std::string::npos);
  }
}

TEST_CASE("recorded fixture: missing marker rows are skipped and counted") {
  FakeEndpoint srv;
  const auto s = fetch_remote_series(srv.endpoint(), "FIXTURE", "k");
  CHECK(s.rows.size() == 2);
  CHECK(s.skipped_missing == 1);
  CHECK(s.rows[1].value == 0.83);
}

TEST_CASE("fixture parses offline too") {
  const auto text = testing::slurp(std::filesystem::path(SPILLOVER_FIXTURE_DIR) / "remote_missing_marker.csv");
  const auto s = parse_remote_csv(text, "IRLTLT01CAM156N", ".", "fixture");
  CHECK(s.skipped_missing == 1);
  const auto custom = parse_remote_csv("date,value\n2020-01-01,#N/A\n2020-02-01,1\n", "X", "#N/A", "custom");
  CHECK(custom.skipped_missing == 1);
  CHECK(custom.rows.size() == 1);
}

TEST_CASE("server errors are retried, then reported") {
  FakeEndpoint srv;
  FetchOptions opts;
  opts.retries = 2;
  const auto s = fetch_remote_series(srv.endpoint(), "FLAKY", "k", opts);
  CHECK(s.rows.size() == 1);
  CHECK(srv.hits() == 3);

  FakeEndpoint srv2;
  opts.retries = 1;
  CHECK_ERRC(fetch_remote_series(srv2.endpoint(), "DOWN", "k", opts), Errc::http_error);
  CHECK(srv2.hits() == 2);
  CHECK_ERRC(fetch_remote_series(srv2.endpoint(), "FORBIDDEN", "k", opts), Errc::http_error);
}

TEST_CASE("malformed and empty payloads") {
  FakeEndpoint srv;
  CHECK_ERRC(fetch_remote_series(srv.endpoint(), "GARBAGE", "k"), Errc::malformed_payload);
  CHECK_ERRC(parse_remote_csv("date,value\n2020-01-01,.\n", "X", ".", "t"), Errc::empty_result);
  CHECK_ERRC(parse_remote_csv("date,value\n2020-01-01,abc\n", "X", ".", "t"), Errc::malformed_payload);
  CHECK_ERRC(parse_remote_csv("date,value\n2020-02-01,1\n2020-01-01,2\n", "X", ".", "t"), Errc::malformed_payload);
}

TEST_CASE("unreachable host is an http error") {
  FetchOptions opts;
  opts.retries = 0;
  opts.timeout_seconds = 1;
  CHECK_ERRC(fetch_remote_series("http://127.0.0.1:1/{series_id}?k={api_key}", "X", "k", opts), Errc::http_error);
}

TEST_CASE("cache file is written on success and reloads as a panel") {
  FakeEndpoint srv;
  const auto dir = testing::scratch_dir("remote_cache");
  FetchOptions opts;
  opts.cache_path = dir / "rate.csv";
  fetch_remote_series(srv.endpoint(), "TWOROWS", "k", opts);
  const auto panel = load_panel(*opts.cache_path, {{"TWOROWS"}});
  CHECK(panel.rows() == 2);
  CHECK(panel.values(0, 0) == 1.5);
}
