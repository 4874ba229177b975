# Config package 