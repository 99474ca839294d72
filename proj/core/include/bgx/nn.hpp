#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bgx/matrix.hpp"
#include "bgx/rng.hpp"

namespace bgx {

enum class Activation : std::uint8_t { ReLU, None };
enum class Normalization : std::uint8_t { BatchNorm, None };
enum class Mode : std::uint8_t { Train, Eval };

/// A parameter tensor with its gradient and Adam moments.
struct Tensor {
    std::string name;
    Matrix value;
    Matrix grad;
    Matrix m;
    Matrix v;

    Tensor() = default;
    Tensor(std::string n, Matrix val)
        : name(std::move(n)),
          value(std::move(val)),
          grad(Matrix::zeros_like(value)),
          m(Matrix::zeros_like(value)),
          v(Matrix::zeros_like(value)) {}
};

/// Fully-connected stack: linear layers with BatchNorm+activation on every
/// hidden layer and a raw affine output. Training-mode forward caches the
/// intermediates needed by backward; a block instance is single-threaded.
class DenseBlock {
  public:
    DenseBlock() = default;
    DenseBlock(std::vector<std::size_t> widths, Activation act, Normalization norm, Rng& rng,
               const std::string& name_prefix);

    Matrix forward(const Matrix& input, Mode mode);

    /// Backpropagates `upstream` (d loss / d output) and returns d loss /
    /// d input. Parameter gradients are accumulated unless
    /// `accumulate_params` is false (used when a frozen adversary is only a
    /// gradient conduit). Throws std::logic_error before any forward.
    Matrix backward(const Matrix& upstream, bool accumulate_params = true);

    std::vector<Tensor*> parameters();
    std::size_t parameter_count() const;
    void zero_grad();

    const std::vector<std::size_t>& widths() const { return widths_; }
    std::size_t input_width() const { return widths_.front(); }
    std::size_t output_width() const { return widths_.back(); }

    /// Non-trainable state (BatchNorm running statistics), checkpointed
    /// alongside parameters.
    std::vector<std::pair<std::string, Matrix*>> state();

  private:
    struct Layer {
        Tensor w;  // [out × in]
        Tensor b;  // [1 × out]
    };
    struct BatchNormLayer {
        Tensor gamma;  // [1 × w]
        Tensor beta;   // [1 × w]
        Matrix run_mean;
        Matrix run_var;
    };
    struct LayerCache {
        Matrix x;       // layer input
        Matrix lin;     // after affine
        Matrix mean;    // batch stats (train) or running stats (eval)
        Matrix var;
        Matrix xhat;    // normalized
        Matrix act_in;  // activation input
    };

    std::vector<std::size_t> widths_;
    Activation act_{Activation::None};
    Normalization norm_{Normalization::None};
    std::vector<Layer> layers_;
    std::vector<BatchNormLayer> bn_;
    std::vector<LayerCache> cache_;
    bool has_cache_{false};
    bool cache_train_{false};

    bool hidden(std::size_t layer) const { return layer + 1 < layers_.size(); }
};

// ---- loss and latent primitives -------------------------------------------

/// Row-wise stable softmax.
Matrix softmax_rows(const Matrix& logits);

/// Mean cross-entropy in nats over (optionally masked) rows; probabilities
/// are clamped at 1e-12 before the log. `mask[i] == 0` drops row i.
double cross_entropy(const Matrix& probs, const std::vector<int>& labels,
                     const std::vector<std::uint8_t>* mask = nullptr);

/// d(mean CE)/d logits for probs = softmax(logits): (p - onehot)/n over kept
/// rows, zero on masked rows. Returns the number of kept rows via out param.
Matrix softmax_cross_entropy_grad(const Matrix& probs, const std::vector<int>& labels,
                                  const std::vector<std::uint8_t>* mask = nullptr);

double mse(const Matrix& recon, const Matrix& target);
Matrix mse_grad(const Matrix& recon, const Matrix& target);

/// 10·log10(mse); the dB convention used by the results tables.
double reconstruction_db(double mse_value);

/// Diagonal Gaussian q(z) = N(mean, exp(log_var)); log_var rows are expected
/// to be pre-clamped to [-10, 10].
struct GaussianLatent {
    Matrix mean;
    Matrix log_var;
};

constexpr double kLogVarClamp = 10.0;

void clamp_log_var(Matrix& log_var);

/// z = mean + exp(log_var/2) ⊙ eps with eps ~ N(0, I) in Train mode; returns
/// the mean in Eval mode. `eps_out`, when non-null, receives the noise draw
/// for the backward pass.
Matrix reparameterize(const GaussianLatent& latent, Rng& rng, Mode mode,
                      Matrix* eps_out = nullptr);

/// Batch-mean of ½·Σ_i (μ_i² + exp(ℓ_i) − ℓ_i − 1).
double kl_standard_normal(const GaussianLatent& latent);

/// Gradients of kl_standard_normal w.r.t. mean and log_var.
void kl_standard_normal_grad(const GaussianLatent& latent, double scale, Matrix& d_mean,
                             Matrix& d_log_var);

/// Gumbel-Softmax relaxation of one categorical draw: softmax((logits+g)/tau)
/// with g sampled Gumbel(0,1). Throws for tau <= 0.
std::vector<double> gumbel_softmax(const std::vector<double>& logits, double tau, Rng& rng);

/// Row-wise Gumbel-Softmax over a batch of logits; `gumbel_out`, when
/// non-null, receives the noise for a later backward.
Matrix gumbel_softmax_rows(const Matrix& logits, double tau, Rng& rng,
                           Matrix* gumbel_out = nullptr);

/// d loss/d logits given d loss/d output for out = softmax((logits+g)/tau).
Matrix gumbel_softmax_backward(const Matrix& out, const Matrix& upstream, double tau);

// ---- optimizer --------------------------------------------------------------

/// Adam with the usual defaults (β₁=0.9, β₂=0.999, ε=1e-8) and a shared step
/// counter. step() refuses to apply a non-finite gradient and reports it.
class Adam {
  public:
    explicit Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : beta1_(beta1), beta2_(beta2), eps_(eps) {}

    /// Applies one update to every tensor. Returns false (all tensors left
    /// untouched, step counter unchanged) when any gradient is non-finite.
    bool step(const std::vector<Tensor*>& params, double lr);

    std::int64_t step_count() const { return t_; }

  private:
    double beta1_, beta2_, eps_;
    std::int64_t t_{0};
};

// ---- hyperparameters and loss bookkeeping -----------------------------------

/// Exponential temperature decay with a positive floor.
struct TauSchedule {
    double initial{5.0};
    double decay{0.01};
    double floor{0.5};

    double at(std::int64_t step) const;
};

struct HyperParams {
    double lambda_s{0.01};
    double lambda_x{0.01};
    double lambda_z{0.01};
    double lambda_a{0.01};
    double learning_rate{1e-3};
    int batch_size{32};
    int epochs{20};
    TauSchedule tau;
    int latent_dim{8};
    int hidden_width{64};
    std::uint64_t seed{1};

    void validate() const;  // throws std::invalid_argument
};

/// Per-batch (or per-epoch mean) loss terms; `total` always satisfies the
/// recomposition identity with the lambdas that built it.
struct LossBreakdown {
    double task{0};
    double nuisance{0};
    double reconstruction{0};
    double kl{0};
    double adversary{0};
    double total{0};

    static LossBreakdown combine(double task, double nuisance, double reconstruction, double kl,
                                 double adversary, const HyperParams& h);
};

}  // namespace bgx
