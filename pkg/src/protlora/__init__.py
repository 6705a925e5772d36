"""LoRA fine-tuning of a small protein language model, with contact-map heads."""

from .contact import ContactHead
from .encoder import Encoder, EncoderConfig, MaskedLM
from .heads import HeadConfig, build_head
from .lora import LoraConfig, LoraLinear, inject, merge_all
from .model import ProteinModel
from .numerics import Tensor, backward, no_grad

__version__ = "0.1.0"

__all__ = [
    "ContactHead", "Encoder", "EncoderConfig", "MaskedLM", "HeadConfig", "build_head",
    "LoraConfig", "LoraLinear", "inject", "merge_all", "ProteinModel", "Tensor",
    "backward", "no_grad",
]
