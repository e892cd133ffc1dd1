"""Kernel implementations: ``_ckernels`` (compiled) and ``pykernels`` (numpy)."""
